#pragma once

// nth-order stochastic dominance between discrete distributions on a shared
// interval [a, b]. X >=_n Y when
//
//     F_X^[n](eta) <= F_Y^[n](eta)        for all eta in [a, b], and
//     E[(b - X)^k] <= E[(b - Y)^k]        for k = 1, ..., n - 1,
//
// where F^[1] = F and F^[n+1](eta) = E[(eta - X)_+^n] / n!.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "sdrdu/distribution.hpp"
#include "sdrdu/error.hpp"
#include "sdrdu/numerics.hpp"

namespace sdrdu {

inline constexpr int kMaxDominanceOrder = 7;
inline constexpr double kDefaultDominanceTol = 1e-10;

namespace detail {
inline constexpr std::array<double, 7> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0};

inline void check_order(int n) {
    if (n < 1) throw DomainError("dominance order must be >= 1");
    if (n > kMaxDominanceOrder) throw DomainError("dominance order must be <= 7");
}
}  // namespace detail

/// F^[n](eta): the CDF for n = 1, otherwise E[(eta - X)_+^{n-1}] / (n-1)!.
inline double iterated_cdf(const DiscreteDistribution& d, double eta, int n) {
    detail::check_order(n);
    if (n == 1) return d.cdf(eta);
    return lower_partial_moment(d, eta, n - 1) / detail::kFactorial[static_cast<std::size_t>(n - 1)];
}

/// E[(b - X)^k] by direct summation.
inline double boundary_moment(const DiscreteDistribution& d, int k) {
    const double b = d.domain().hi;
    return d.expect([&](double x) {
        double t = 1.0;
        for (int j = 0; j < k; ++j) t *= (b - x);
        return t;
    });
}

/// Violation of the integral condition at eta.
struct IntegralWitness {
    double eta;
    double gap;
    friend bool operator==(const IntegralWitness&, const IntegralWitness&) = default;
};

/// Violation of the boundary-moment condition for index k.
struct MomentWitness {
    int k;
    double gap;
    friend bool operator==(const MomentWitness&, const MomentWitness&) = default;
};

using DominanceWitness = std::variant<IntegralWitness, MomentWitness>;

/// Outcome of a dominance test. `max_gap` is the largest left-minus-right
/// difference over every condition checked; `marginal` flags verdicts that
/// would flip for some tolerance in [0, 2 tol], i.e. 0 < max_gap <= 2 tol.
struct DominanceVerdict {
    bool holds = false;
    std::optional<DominanceWitness> witness;
    int order = 1;
    double tol = kDefaultDominanceTol;
    double max_gap = 0.0;
    bool marginal = false;
};

namespace detail {

inline void check_pair(const DiscreteDistribution& x, const DiscreteDistribution& y, int n, double tol) {
    if (!(x.domain() == y.domain())) throw ValidationError("domain", "distributions must share a domain");
    check_order(n);
    if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
}

inline std::vector<double> merged_support(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    std::vector<double> pts(x.support().begin(), x.support().end());
    pts.insert(pts.end(), y.support().begin(), y.support().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Tracks the largest integral-condition gap seen so far.
struct GapTracker {
    double gap = -std::numeric_limits<double>::infinity();
    double eta = 0.0;
    void offer(double g, double at) {
        if (g > gap) {
            gap = g;
            eta = at;
        }
    }
};

inline DominanceVerdict finish_verdict(const DiscreteDistribution& x, const DiscreteDistribution& y,
                                       int n, double tol, const GapTracker& integral) {
    DominanceVerdict v;
    v.order = n;
    v.tol = tol;
    v.max_gap = integral.gap;
    if (integral.gap > tol) v.witness = IntegralWitness{integral.eta, integral.gap};
    for (int k = 1; k <= n - 1; ++k) {
        double g = boundary_moment(x, k) - boundary_moment(y, k);
        v.max_gap = std::max(v.max_gap, g);
        if (g > tol && !v.witness) v.witness = MomentWitness{k, g};
    }
    v.holds = !v.witness.has_value();
    v.marginal = v.max_gap > 0.0 && v.max_gap <= 2.0 * tol;
    return v;
}

}  // namespace detail

/// Gap function D(eta) = F_X^[n](eta) - F_Y^[n](eta) on [a, b] for n >= 2 as a
/// piecewise polynomial with breakpoints at a, b and the merged supports.
inline PiecewisePolynomial dominance_gap(const DiscreteDistribution& x, const DiscreteDistribution& y, int n) {
    detail::check_order(n);
    if (n < 2) throw DomainError("dominance_gap is polynomial only for n >= 2");
    if (!(x.domain() == y.domain())) throw ValidationError("domain", "distributions must share a domain");
    const Domain dom = x.domain();
    std::vector<double> bps{dom.lo};
    for (double t : detail::merged_support(x, y)) {
        if (t > dom.lo && t < dom.hi) bps.push_back(t);
    }
    bps.push_back(dom.hi);

    const int k = n - 1;
    const double scale = 1.0 / detail::kFactorial[static_cast<std::size_t>(k)];
    std::vector<Polynomial> pieces;
    pieces.reserve(bps.size() - 1);
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double left = bps[i];
        Polynomial acc;
        for (std::size_t j = 0; j < x.size() && x.support()[j] <= left; ++j) {
            acc = acc + (scale * x.probs()[j]) * shifted_power(x.support()[j], k);
        }
        for (std::size_t j = 0; j < y.size() && y.support()[j] <= left; ++j) {
            acc = acc - (scale * y.probs()[j]) * shifted_power(y.support()[j], k);
        }
        pieces.push_back(std::move(acc));
    }
    return {std::move(bps), std::move(pieces)};
}

/// Exact test of X >=_n Y.
///
/// n = 1 compares the step CDFs at every merged support point; the left limit
/// at each point equals the value at the previous one, so this covers [a, b].
/// For n >= 2 the gap D is a piecewise polynomial; its candidate maximizers
/// (breakpoints and stationary points) are located on the polynomial form and
/// D is then re-evaluated there by direct summation.
inline DominanceVerdict dominates_n(const DiscreteDistribution& x, const DiscreteDistribution& y, int n,
                                    double tol = kDefaultDominanceTol) {
    detail::check_pair(x, y, n, tol);
    const Domain dom = x.domain();
    detail::GapTracker integral;
    auto gap_at = [&](double eta) { return iterated_cdf(x, eta, n) - iterated_cdf(y, eta, n); };

    if (n == 1) {
        auto pts = detail::merged_support(x, y);
        integral.offer(pts.front() > dom.lo ? 0.0 : gap_at(dom.lo), dom.lo);
        for (double t : pts) integral.offer(gap_at(t), t);
    } else {
        const auto d = dominance_gap(x, y, n);
        for (auto [eta, piece] : critical_points(d, dom.lo, dom.hi)) {
            (void)piece;
            integral.offer(gap_at(eta), eta);
        }
    }
    return detail::finish_verdict(x, y, n, tol, integral);
}

/// Necessary-condition oracle: the same inequalities evaluated only on
/// `grid_size` equally spaced points of [a, b] plus all support points.
inline DominanceVerdict grid_oracle(const DiscreteDistribution& x, const DiscreteDistribution& y, int n,
                                    int grid_size, double tol = kDefaultDominanceTol) {
    detail::check_pair(x, y, n, tol);
    if (grid_size < 2) throw DomainError("grid_size must be >= 2");
    const Domain dom = x.domain();
    std::vector<double> etas;
    etas.reserve(static_cast<std::size_t>(grid_size) + x.size() + y.size());
    for (int i = 0; i < grid_size; ++i) {
        etas.push_back(i + 1 == grid_size ? dom.hi : dom.lo + dom.width() * i / (grid_size - 1));
    }
    for (double t : detail::merged_support(x, y)) etas.push_back(t);
    std::sort(etas.begin(), etas.end());

    detail::GapTracker integral;
    for (double eta : etas) integral.offer(iterated_cdf(x, eta, n) - iterated_cdf(y, eta, n), eta);
    return detail::finish_verdict(x, y, n, tol, integral);
}

}  // namespace sdrdu
