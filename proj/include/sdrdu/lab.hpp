#pragma once

// Consistency-testing machinery: generators of dominance-ordered pairs and a
// falsifier that searches for pairs Y >=_n X on which a functional ranks X
// strictly above Y.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdrdu/distribution.hpp"
#include "sdrdu/dominance.hpp"
#include "sdrdu/error.hpp"
#include "sdrdu/random.hpp"
#include "sdrdu/rdu.hpp"

namespace sdrdu {

inline constexpr double kViolationGap = 1e-8;

/// Parameters of the two-lottery construction
///
///   X = (1/2 - 1/2n) a d[n e] + (1/2n) a d[-n(n-1) e] + (1/2) a d[y] + (1 - a) d[z]
///   Y = (1/2 - 1/2n) a d[y + n e] + (1/2n) a d[y - n(n-1) e] + (1/2) a d[0] + (1 - a) d[z]
///
/// (a = alpha, e = epsilon, d = point mass), for which X <=_3 Y. Y carries
/// the zero-mean noise n e / -n(n-1) e on its high branch, X on its low one.
struct LemmaConstructionParams {
    int n_param = 2;
    double alpha = 0.5;
    double epsilon = 0.1;
    double y = 0.1;
    double z = -0.5;
    Domain domain{-1.0, 1.0};
};

/// Throws ValidationError naming the first broken requirement of the chain
/// b >= y+ne > ne > y > 0 > y-n(n-1)e > -n(n-1)e > z >= a.
inline void validate(const LemmaConstructionParams& p) {
    validate_domain(p.domain);
    const double n = p.n_param;
    const double up = n * p.epsilon;
    const double down = n * (n - 1.0) * p.epsilon;
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(what, "construction requires " + std::string(what));
    };
    require(p.n_param >= 1, "n >= 1");
    require(p.alpha > 0.0 && p.alpha < 1.0, "0 < alpha < 1");
    require(p.epsilon > 0.0, "epsilon > 0");
    require(p.y <= p.epsilon, "y <= epsilon");
    require(p.domain.lo < 0.0 && 0.0 < p.domain.hi, "a < 0 < b");
    require(p.domain.hi >= p.y + up, "b >= y + n*epsilon");
    require(p.y + up > up, "y + n*epsilon > n*epsilon");
    require(up > p.y, "n*epsilon > y");
    require(p.y > 0.0, "y > 0");
    require(0.0 > p.y - down, "0 > y - n(n-1)*epsilon");
    require(p.y - down > -down, "y - n(n-1)*epsilon > -n(n-1)*epsilon");
    require(-down > p.z, "-n(n-1)*epsilon > z");
    require(p.z >= p.domain.lo, "z >= a");
}

/// Pair produced by the construction; `y` dominates `x` at third order.
struct LemmaPair {
    DiscreteDistribution x;
    DiscreteDistribution y;
    DominanceVerdict verdict;
};

inline LemmaPair lemma_pair(const LemmaConstructionParams& p) {
    validate(p);
    const double n = p.n_param;
    const double up = n * p.epsilon;
    const double down = -n * (n - 1.0) * p.epsilon;
    const double w_up = (0.5 - 0.5 / n) * p.alpha;
    const double w_down = (0.5 / n) * p.alpha;
    const double w_y = 0.5 * p.alpha;
    const double w_z = 1.0 - p.alpha;
    auto x = make_discrete(p.domain, {up, down, p.y, p.z}, {w_up, w_down, w_y, w_z});
    auto y = make_discrete(p.domain, {p.y + up, p.y + down, 0.0, p.z}, {w_up, w_down, w_y, w_z});
    auto verdict = dominates_n(y, x, 3);
    if (!verdict.holds) {
        throw Error("lemma construction failed third-order dominance check (max gap " +
                    std::to_string(verdict.max_gap) + ")");
    }
    return {std::move(x), std::move(y), std::move(verdict)};
}

/// The fixed parameter sweep: epsilon in {1e-1, ..., 1e-4}, n in {1, ..., 20},
/// alpha in {0.1, ..., 0.9}, y = epsilon, z = -n(n-1)epsilon - 0.01 (b - a).
/// Combinations violating the ordering chain on `domain` are kept; callers
/// skip them.
inline std::vector<LemmaConstructionParams> default_lemma_sweep(Domain domain) {
    std::vector<LemmaConstructionParams> out;
    for (int e = 1; e <= 4; ++e) {
        const double eps = std::pow(10.0, -e);
        for (int n = 1; n <= 20; ++n) {
            for (int a = 1; a <= 9; ++a) {
                LemmaConstructionParams p;
                p.n_param = n;
                p.alpha = a / 10.0;
                p.epsilon = eps;
                p.y = eps;
                p.z = -n * (n - 1.0) * eps - 0.01 * domain.width();
                p.domain = domain;
                out.push_back(p);
            }
        }
    }
    return out;
}

/// An ordered pair: `better` dominates `worse` at the recorded order.
struct OrderedPair {
    DiscreteDistribution better;
    DiscreteDistribution worse;
    DominanceVerdict verdict;
};

struct ApportionmentResult {
    std::optional<OrderedPair> pair;
    std::string rejection;

    bool accepted() const noexcept { return pair.has_value(); }
};

/// Risk-apportionment pair: with base B, shift k > 0 and zero-mean noise N,
///   high = 1/2 (B + k + N) + 1/2 B      (noise attached to the high state)
///   low  = 1/2 (B + k) + 1/2 (B + N)    (noise attached to the low state).
/// The order is decided by dominates_n at `order`, never assumed. The seed
/// only fixes which orientation is tested first.
inline ApportionmentResult apportionment_pair(const DiscreteDistribution& base, double k,
                                              const DiscreteDistribution& noise, std::uint64_t seed,
                                              int order = 3, double tol = kDefaultDominanceTol) {
    if (!(k > 0.0)) throw ValidationError("k", "shift must be positive");
    if (std::abs(noise.mean()) > kProbabilityTol) throw ValidationError("noise", "noise must have zero mean");
    const Domain dom = base.domain();
    auto fits = [&](double lo, double hi) { return lo >= dom.lo && hi <= dom.hi; };
    if (!fits(base.min() + noise.min(), base.max() + k + noise.max()) || !fits(base.min(), base.max() + k)) {
        return {std::nullopt, "support overflow: shifted or noisy states leave [" + std::to_string(dom.lo) +
                                  ", " + std::to_string(dom.hi) + "]"};
    }
    auto embed = [&](const DiscreteDistribution& d) {
        return make_discrete(dom, {d.support().begin(), d.support().end()}, {d.probs().begin(), d.probs().end()});
    };
    const auto noisy_noise = embed(noise);
    const auto high_state = shifted(base, k);
    const auto high = mix({{0.5, independent_sum(high_state, noisy_noise)}, {0.5, base}});
    const auto low = mix({{0.5, high_state}, {0.5, independent_sum(base, noisy_noise)}});

    const bool high_first = Rng(seed).uniform() < 0.5;
    const auto& first = high_first ? high : low;
    const auto& second = high_first ? low : high;
    if (auto v = dominates_n(first, second, order, tol); v.holds) return {OrderedPair{first, second, v}, {}};
    if (auto v = dominates_n(second, first, order, tol); v.holds) return {OrderedPair{second, first, v}, {}};
    return {std::nullopt, "neither candidate dominates the other at order " + std::to_string(order)};
}

struct NsdPair {
    OrderedPair pair;
    std::size_t candidates = 0;
    double acceptance_rate = 0.0;
};

inline constexpr std::size_t kDefaultPairTrialCap = 10000;

/// Rejection-samples independent random distributions on `domain` until one
/// strictly dominates the other at order n. Knife-edge verdicts (marginal
/// flag set) are rejected so that tolerance slack can never manufacture an
/// ordering.
inline NsdPair random_nsd_pair(int n, Domain domain, int atom_budget, std::uint64_t seed,
                               std::size_t trial_cap = kDefaultPairTrialCap, double tol = kDefaultDominanceTol) {
    if (atom_budget < 2) throw DomainError("atom_budget must be >= 2");
    Rng rng(seed);
    for (std::size_t t = 1; t <= trial_cap; ++t) {
        auto a = random_distribution(rng, domain, atom_budget);
        auto b = random_distribution(rng, domain, atom_budget);
        // E[X] >= E[Y] is necessary for every order; it screens out most draws.
        if (n >= 2 && a.mean() < b.mean()) std::swap(a, b);
        for (int orient = 0; orient < 2; ++orient) {
            const auto& better = orient == 0 ? a : b;
            const auto& worse = orient == 0 ? b : a;
            if (n >= 2 && orient == 1) break;
            auto v = dominates_n(better, worse, n, tol);
            if (v.holds && !v.marginal) {
                return {OrderedPair{better, worse, std::move(v)}, t, 1.0 / static_cast<double>(t)};
            }
        }
    }
    throw ExhaustionError("no order-" + std::to_string(n) + " dominant pair within " + std::to_string(trial_cap) +
                          " candidates");
}

/// A pair with better >=_n worse on which the functional prefers `worse` by
/// more than the violation threshold.
struct Violation {
    DiscreteDistribution worse;
    DiscreteDistribution better;
    int order;
    double worse_value;
    double better_value;
    double gap;
    DominanceVerdict verdict;
    std::string source;
    std::size_t index;
    std::optional<LemmaConstructionParams> lemma;
};

template <typename F>
concept DistributionFunctional = std::invocable<F, const DiscreteDistribution&> &&
    std::convertible_to<std::invoke_result_t<F, const DiscreteDistribution&>, double>;

struct SweepResult {
    std::optional<Violation> violation;
    std::size_t points_examined = 0;
    std::size_t valid_points = 0;
};

/// Runs the lemma construction over `sweep` and returns the first violation.
template <DistributionFunctional F>
SweepResult lemma_sweep(F&& functional, const std::vector<LemmaConstructionParams>& sweep,
                        double gap_threshold = kViolationGap) {
    SweepResult out;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        ++out.points_examined;
        try {
            validate(sweep[i]);
        } catch (const ValidationError&) {
            continue;
        }
        ++out.valid_points;
        auto lp = lemma_pair(sweep[i]);
        const double vx = functional(lp.x);
        const double vy = functional(lp.y);
        if (vx - vy > gap_threshold) {
            out.violation = Violation{lp.x, lp.y, 3, vx, vy, vx - vy, lp.verdict, "lemma-sweep", i, sweep[i]};
            return out;
        }
    }
    return out;
}

struct FalsifyOptions {
    int atom_budget = 5;
    std::size_t pair_trial_cap = 2000;
    double gap_threshold = kViolationGap;
    double tol = kDefaultDominanceTol;
    bool lemma_sweep = true;
};

struct FalsifyResult {
    std::optional<Violation> violation;
    std::size_t sweep_points = 0;
    std::size_t random_pairs = 0;
    std::size_t exhausted_trials = 0;
};

/// Searches for a violation of order-n consistency. For n = 3 the lemma sweep
/// runs first (when the domain straddles 0); then `trials` random pairs, trial
/// t drawing from the substream (seed, t). The first violation by trial index
/// is returned, so the outcome is a pure function of the arguments.
template <DistributionFunctional F>
FalsifyResult falsify(F&& functional, Domain domain, int n, std::size_t trials, std::uint64_t seed,
                      const FalsifyOptions& opts = {}) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    FalsifyResult out;
    if (n == 3 && opts.lemma_sweep && domain.lo < 0.0 && domain.hi > 0.0) {
        auto sweep = lemma_sweep(functional, default_lemma_sweep(domain), opts.gap_threshold);
        out.sweep_points = sweep.points_examined;
        if (sweep.violation) {
            out.violation = std::move(sweep.violation);
            return out;
        }
    }
    for (std::size_t t = 0; t < trials; ++t) {
        std::optional<NsdPair> drawn;
        try {
            drawn = random_nsd_pair(n, domain, opts.atom_budget, Rng::derive_seed(seed, t), opts.pair_trial_cap,
                                    opts.tol);
        } catch (const ExhaustionError&) {
            ++out.exhausted_trials;
            continue;
        }
        ++out.random_pairs;
        auto& p = drawn->pair;
        const double vw = functional(p.worse);
        const double vb = functional(p.better);
        if (vw - vb > opts.gap_threshold) {
            out.violation = Violation{p.worse, p.better, n, vw, vb, vw - vb, p.verdict, "random", t, std::nullopt};
            return out;
        }
    }
    return out;
}

inline FalsifyResult falsify(const RduModel& model, int n, std::size_t trials, std::uint64_t seed,
                             const FalsifyOptions& opts = {}) {
    return falsify([&](const DiscreteDistribution& d) { return rdu_eval(model, d); }, model.utility.domain(), n,
                   trials, seed, opts);
}

}  // namespace sdrdu
