#pragma once

// Batch checks of the RDU identities and of nSD consistency for the
// worst-case mixture weightings. Shared by the CLI and the acceptance driver.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "sdrdu/lab.hpp"
#include "sdrdu/random.hpp"
#include "sdrdu/rdu.hpp"
#include "sdrdu/utility.hpp"
#include "sdrdu/weighting.hpp"

namespace sdrdu {

inline constexpr Domain kSuiteDomain{-1.0, 1.0};
inline constexpr int kSuiteAtomBudget = 50;
inline constexpr double kIdentityTol = 1e-10;

/// One of identity, exponential(theta in [0.1, 3]) or negative_power(eta in
/// (a, b], m in 1..4), chosen uniformly.
inline UtilityFunction random_suite_utility(Rng& rng, Domain d) {
    switch (rng.uniform_int(0, 2)) {
    case 0:
        return UtilityFunction::identity(d);
    case 1:
        return UtilityFunction::exponential(rng.uniform(0.1, 3.0), d);
    default: {
        double pivot = d.hi - rng.uniform() * d.width();
        if (pivot <= d.lo) pivot = d.hi;
        return UtilityFunction::negative_power(pivot, rng.uniform_int(1, 4), d);
    }
    }
}

inline std::string describe(const UtilityFunction& u) {
    std::string out(u.form_name());
    char buf[64];
    if (const auto* f = std::get_if<utility_form::Exponential>(&u.form())) {
        std::snprintf(buf, sizeof buf, "(theta=%.17g)", f->theta);
        out += buf;
    } else if (const auto* f = std::get_if<utility_form::NegativePower>(&u.form())) {
        std::snprintf(buf, sizeof buf, "(eta=%.17g,m=%d)", f->pivot, f->m);
        out += buf;
    } else if (const auto* f = std::get_if<utility_form::Power>(&u.form())) {
        std::snprintf(buf, sizeof buf, "(gamma=%.17g)", f->gamma);
        out += buf;
    }
    return out;
}

struct IdentityRow {
    std::size_t trial;
    std::string utility;
    double lambda;
    std::size_t atoms;
    double gap;
};

struct IdentitySuiteResult {
    std::vector<IdentityRow> rows;
    double max_gap = 0.0;
    bool pass = true;
};

/// Compares rdu_eval under lambda_jump(lambda) with the closed-form mixture
/// on random (u, lambda, X). Passes when every gap is <= tol.
inline IdentitySuiteResult lambda_identity_suite(std::size_t trials, std::uint64_t seed, double tol = kIdentityTol) {
    IdentitySuiteResult out;
    out.rows.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        auto u = random_suite_utility(rng, kSuiteDomain);
        const double lambda = rng.uniform();
        auto x = random_distribution(rng, kSuiteDomain, kSuiteAtomBudget);
        const double lhs = rdu_eval(RduModel{u, WeightingFunction::lambda_jump(lambda)}, x);
        const double rhs = closed_form_lambda(u, lambda, x);
        const double gap = std::abs(lhs - rhs);
        out.max_gap = std::max(out.max_gap, gap);
        if (!(gap <= tol)) out.pass = false;
        out.rows.push_back({t, describe(u), lambda, x.size(), gap});
    }
    return out;
}

/// Compares rdu_eval under indicator_one with u(min X). Passes only on exact
/// equality.
inline IdentitySuiteResult indicator_identity_suite(std::size_t trials, std::uint64_t seed) {
    IdentitySuiteResult out;
    out.rows.reserve(trials);
    const auto h = WeightingFunction::indicator_one();
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        auto u = random_suite_utility(rng, kSuiteDomain);
        auto x = random_distribution(rng, kSuiteDomain, kSuiteAtomBudget);
        const double lhs = rdu_eval(RduModel{u, h}, x);
        const double rhs = u(x.min());
        const double gap = std::abs(lhs - rhs);
        out.max_gap = std::max(out.max_gap, gap);
        if (lhs != rhs) out.pass = false;
        out.rows.push_back({t, describe(u), 0.0, x.size(), gap});
    }
    return out;
}

struct ConsistencyRow {
    std::string utility;
    std::string weighting;
    int n;
    bool violation_found;
    double gap;
    std::size_t random_pairs;
    std::size_t sweep_points;
};

struct ConsistencySuiteResult {
    std::vector<ConsistencyRow> rows;
    bool pass = true;
};

/// Runs falsify for u in {identity, exponential(1)} and n in {3, 4, 5}
/// against each weighting. Passes when no run finds a violation.
inline ConsistencySuiteResult consistency_suite(const std::vector<WeightingFunction>& weightings, std::size_t trials,
                                                std::uint64_t seed) {
    ConsistencySuiteResult out;
    const std::vector<UtilityFunction> utilities{UtilityFunction::identity(kSuiteDomain),
                                                 UtilityFunction::exponential(1.0, kSuiteDomain)};
    std::uint64_t run = 0;
    for (const auto& u : utilities) {
        for (const auto& h : weightings) {
            for (int n = 3; n <= 5; ++n) {
                auto r = falsify(RduModel{u, h}, n, trials, Rng::derive_seed(seed, run++));
                std::string hname(h.form_name());
                if (const auto* f = std::get_if<weighting_form::LambdaJump>(&h.form())) {
                    char buf[48];
                    std::snprintf(buf, sizeof buf, "(lambda=%.17g)", f->lambda);
                    hname += buf;
                }
                const bool found = r.violation.has_value();
                if (found) out.pass = false;
                out.rows.push_back(
                    {describe(u), hname, n, found, found ? r.violation->gap : 0.0, r.random_pairs, r.sweep_points});
            }
        }
    }
    return out;
}

inline std::vector<WeightingFunction> lambda_suite_weightings() {
    return {WeightingFunction::lambda_jump(0.0), WeightingFunction::lambda_jump(0.3),
            WeightingFunction::lambda_jump(0.7), WeightingFunction::lambda_jump(1.0)};
}

}  // namespace sdrdu
