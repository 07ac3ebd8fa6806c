#pragma once

// Slow, independent reference computations used to check the library.
// None of these call into the routines they are checking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "sdrdu/distribution.hpp"
#include "sdrdu/utility.hpp"
#include "sdrdu/weighting.hpp"

namespace oracle {

using sdrdu::DiscreteDistribution;

/// Uniform mesh on [lo, hi] with the given extra points merged in.
inline std::vector<double> mesh(double lo, double hi, int n, const std::vector<double>& extra = {}) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1));
    for (double e : extra) {
        if (e >= lo && e <= hi) xs.push_back(e);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

/// F^{[n]} on `xs` by repeated cumulative trapezoid integration of the CDF
/// from the left end of the mesh. Exact for n <= 2 when the mesh contains the
/// support; O(h^2) beyond.
inline std::vector<double> iterated_cdf_quadrature(const DiscreteDistribution& d, const std::vector<double>& xs,
                                                   int n) {
    std::vector<double> f(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d.support()[j] <= xs[i]) c += d.probs()[j];
        }
        f[i] = c;
    }
    for (int level = 2; level <= n; ++level) {
        std::vector<double> g(xs.size(), 0.0);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            double left = f[i - 1];
            // The CDF is right-continuous; on (x_{i-1}, x_i) it equals f[i-1].
            double right = level == 2 ? f[i - 1] : f[i];
            g[i] = g[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (left + right);
        }
        f = std::move(g);
    }
    return f;
}

/// Choquet integral by the ascending decumulative formula
/// u(x_1) + sum_{j >= 2} h(P(X >= x_j)) (u(x_j) - u(x_{j-1})).
inline double rdu_decumulative(const std::function<double(double)>& u, const std::function<double(double)>& h,
                               const DiscreteDistribution& d) {
    auto xs = d.support();
    double total = u(xs[0]);
    for (std::size_t j = 1; j < xs.size(); ++j) {
        double tail = 0.0;
        for (std::size_t i = j; i < xs.size(); ++i) tail += d.probs()[i];
        tail = std::min(tail, 1.0);
        total += h(tail) * (u(xs[j]) - u(xs[j - 1]));
    }
    return total;
}

/// sup or inf over x1 < x2 <= x3 < x4 on the grid of
/// [(f(x4) - f(x3)) / (x4 - x3)] / [(f(x2) - f(x1)) / (x2 - x1)].
/// Quadruples whose earlier chord is flat are skipped.
inline double quadruple_ratio(const std::function<double(double)>& f, double lo, double hi, int n, bool sup) {
    auto xs = mesh(lo, hi, n);
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
    double best = sup ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    const std::size_t m = xs.size();
    for (std::size_t i1 = 0; i1 < m; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < m; ++i2) {
            const double early = (fs[i2] - fs[i1]) / (xs[i2] - xs[i1]);
            if (early <= 0.0) continue;
            for (std::size_t i3 = i2; i3 < m; ++i3) {
                for (std::size_t i4 = i3 + 1; i4 < m; ++i4) {
                    const double r = (fs[i4] - fs[i3]) / (xs[i4] - xs[i3]) / early;
                    best = sup ? std::max(best, r) : std::min(best, r);
                }
            }
        }
    }
    return best;
}

/// inf over the interior grid points of s (1 - h(s)) / ((1 - s) h(s)).
inline double pessimism_grid(const std::function<double(double)>& h, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n - 1; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        const double hs = h(s);
        if (hs <= 0.0) continue;
        best = std::min(best, s * (1.0 - hs) / ((1.0 - s) * hs));
    }
    return best;
}

/// Central finite difference of order k with step `step`.
inline double finite_difference(const std::function<double(double)>& f, double x, int k, double step) {
    double total = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        total += sign * binom * f(x + (0.5 * k - j) * step);
        binom = binom * (k - j) / (j + 1);
    }
    return total / std::pow(step, k);
}

}  // namespace oracle
