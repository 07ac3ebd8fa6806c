#pragma once

// Rank-dependent utility on discrete distributions. With outcomes ranked
// x_1 > ... > x_m and cumulative probabilities c_i = p_1 + ... + p_i,
//
//     R_{u,h}(X) = sum_i (h(c_i) - h(c_{i-1})) u(x_i).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sdrdu/distribution.hpp"
#include "sdrdu/error.hpp"
#include "sdrdu/utility.hpp"
#include "sdrdu/weighting.hpp"

namespace sdrdu {

struct RduModel {
    UtilityFunction utility;
    WeightingFunction weighting;
};

/// The last cumulative probability is pinned to exactly 1 and every earlier
/// one is kept strictly below 1, so weighting functions that jump at 1 see
/// the jump exactly once regardless of rounding in the partial sums.
inline double rdu_eval(const RduModel& model, const DiscreteDistribution& x) {
    const auto xs = x.support();
    const auto ps = x.probs();
    const std::size_t m = xs.size();
    constexpr double below_one = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    double total = 0.0;
    double cum = 0.0;
    double h_prev = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = m - 1 - r;
        cum += ps[i];
        const double c = r + 1 == m ? 1.0 : std::min(cum, below_one);
        const double h_cur = model.weighting(c);
        total += (h_cur - h_prev) * model.utility(xs[i]);
        h_prev = h_cur;
    }
    return total;
}

/// Dual utility I_h: RDU with the identity utility on X's domain.
inline double dual_eval(const WeightingFunction& h, const DiscreteDistribution& x) {
    return rdu_eval(RduModel{UtilityFunction::identity(x.domain()), h}, x);
}

/// lambda E[u(X)] + (1 - lambda) u(min X).
inline double closed_form_lambda(const UtilityFunction& u, double lambda, const DiscreteDistribution& x) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
    const double eu = x.expect([&](double v) { return u(v); });
    return lambda * eu + (1.0 - lambda) * u(x.min());
}

}  // namespace sdrdu
