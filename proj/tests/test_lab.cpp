#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "sdrdu/lab.hpp"

using namespace sdrdu;
using Catch::Approx;

namespace {
const Domain sym{-1.0, 1.0};

void check_atoms(const DiscreteDistribution& d, const std::vector<std::pair<double, double>>& atoms) {
    REQUIRE(d.size() == atoms.size());
    for (const auto& [x, p] : atoms) {
        bool found = false;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (std::abs(d.support()[i] - x) < 1e-15) {
                found = true;
                CHECK(d.probs()[i] == Approx(p).margin(1e-15));
            }
        }
        INFO("atom " << x);
        CHECK(found);
    }
}

/// Third-order verdict from the quadrature oracle: max of F_a^[3] - F_b^[3]
/// together with the two boundary moment gaps.
double tsd_gap(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    std::vector<double> extra(a.support().begin(), a.support().end());
    extra.insert(extra.end(), b.support().begin(), b.support().end());
    auto xs = oracle::mesh(a.domain().lo, a.domain().hi, 20001, extra);
    auto fa = oracle::iterated_cdf_quadrature(a, xs, 3);
    auto fb = oracle::iterated_cdf_quadrature(b, xs, 3);
    double g = -1e300;
    for (std::size_t i = 0; i < xs.size(); ++i) g = std::max(g, fa[i] - fb[i]);
    const double hi = a.domain().hi;
    for (int k = 1; k <= 2; ++k) {
        g = std::max(g, a.expect([&](double x) { return std::pow(hi - x, k); }) -
                            b.expect([&](double x) { return std::pow(hi - x, k); }));
    }
    return g;
}
}  // namespace

TEST_CASE("lemma construction atoms") {
    LemmaConstructionParams p{2, 0.5, 0.1, 0.1, -0.5, sym};
    auto lp = lemma_pair(p);
    check_atoms(lp.x, {{0.2, 0.125}, {-0.2, 0.125}, {0.1, 0.25}, {-0.5, 0.5}});
    check_atoms(lp.y, {{0.3, 0.125}, {-0.1, 0.125}, {0.0, 0.25}, {-0.5, 0.5}});
    CHECK(lp.verdict.holds);
    CHECK(tsd_gap(lp.y, lp.x) <= 1e-8);
}

TEST_CASE("lemma construction validation names the broken inequality") {
    LemmaConstructionParams p{2, 0.5, 0.1, 0.1, -0.5, sym};
    auto field = [](LemmaConstructionParams q) {
        try {
            validate(q);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("ok");
    };
    CHECK(field(p) == "ok");
    auto q = p;
    q.y = 0.2;
    CHECK(field(q) == "y <= epsilon");
    q = p;
    q.z = -0.1;
    CHECK(field(q) == "-n(n-1)*epsilon > z");
    q = p;
    q.alpha = 1.0;
    CHECK(field(q) == "0 < alpha < 1");
    q = p;
    q.n_param = 1;
    CHECK(field(q) == "n*epsilon > y");
    q.y = 0.05;
    CHECK(field(q) == "0 > y - n(n-1)*epsilon");
    q = p;
    q.epsilon = 0.5;
    q.y = 0.5;
    CHECK(field(q) == "b >= y + n*epsilon");
}

TEST_CASE("every valid sweep point yields a well-formed third-order pair") {
    auto sweep = default_lemma_sweep(sym);
    CHECK(sweep.size() == 720);
    int valid = 0;
    for (const auto& p : sweep) {
        try {
            validate(p);
        } catch (const ValidationError&) {
            continue;
        }
        ++valid;
        auto lp = lemma_pair(p);
        for (const auto* d : {&lp.x, &lp.y}) {
            CHECK(d->min() >= sym.lo);
            CHECK(d->max() <= sym.hi);
            const double total = std::accumulate(d->probs().begin(), d->probs().end(), 0.0);
            CHECK(std::abs(total - 1.0) <= 1e-12);
        }
        // zero-mean noise: (1 - 1/n) n e + (1/n)(-n(n-1) e)
        const double n = p.n_param;
        const double noise_mean = (1.0 - 1.0 / n) * (n * p.epsilon) + (1.0 / n) * (-n * (n - 1.0) * p.epsilon);
        CHECK(std::abs(noise_mean) <= 1e-15);
        // independent check of Y >=_3 X by quadrature at a subsample
        if (valid % 25 == 0) CHECK(tsd_gap(lp.y, lp.x) <= 1e-8);
    }
    CHECK(valid > 100);
}

TEST_CASE("dual value gap of the construction for the squared weighting") {
    // for h(s) = s^2 the gap I(X) - I(Y) equals y alpha^2 (1/2 - 1/n)
    const auto h = WeightingFunction::power(2.0);
    for (int n : {3, 5, 10}) {
        for (double alpha : {0.2, 0.5, 0.9}) {
            const double eps = 1e-3;
            LemmaConstructionParams p{n, alpha, eps, eps, -n * (n - 1.0) * eps - 0.02, sym};
            auto lp = lemma_pair(p);
            const double gap = dual_eval(h, lp.x) - dual_eval(h, lp.y);
            CHECK(gap == Approx(eps * alpha * alpha * (0.5 - 1.0 / n)).epsilon(1e-6));
        }
    }
}

TEST_CASE("apportionment pairs") {
    auto base = point_mass(sym, 0.0);
    auto zero = point_mass(sym, 0.0);
    auto deg = apportionment_pair(base, 0.1, zero, 1);
    REQUIRE(deg.accepted());
    CHECK(deg.pair->better == deg.pair->worse);

    auto noise = make_discrete(sym, {-0.2, 0.2}, {0.5, 0.5});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto r = apportionment_pair(base, 0.1, noise, seed);
        REQUIRE(r.accepted());
        CHECK(tsd_gap(r.pair->better, r.pair->worse) <= 1e-8);
        // noise attached to the high state is preferred by a prudent agent
        CHECK(r.pair->better.min() == Approx(-0.1));
        CHECK(r.pair->better.max() == Approx(0.3));
    }

    auto biased = make_discrete(sym, {-0.1, 0.3}, {0.5, 0.5});
    CHECK_THROWS_AS(apportionment_pair(base, 0.1, biased, 1), ValidationError);
    auto overflow = apportionment_pair(point_mass(sym, 0.9), 0.5, noise, 1);
    CHECK_FALSE(overflow.accepted());
    CHECK_FALSE(overflow.rejection.empty());
}

TEST_CASE("random dominating pairs") {
    auto x = make_discrete(sym, {-0.5, 0.1}, {0.3, 0.7});
    CHECK(dominates_n(shifted(x, 0.2), x, 1).holds);

    auto a = random_nsd_pair(3, sym, 4, 42);
    auto b = random_nsd_pair(3, sym, 4, 42);
    CHECK(a.pair.better == b.pair.better);
    CHECK(a.pair.worse == b.pair.worse);
    CHECK(a.candidates == b.candidates);
    CHECK(a.acceptance_rate == Approx(1.0 / a.candidates));
    CHECK(a.pair.verdict.holds);
    CHECK(tsd_gap(a.pair.better, a.pair.worse) <= 1e-8);

    // a tiny cap may or may not exhaust; anything returned must be valid
    try {
        auto p = random_nsd_pair(5, sym, 2, 7, 10);
        CHECK(dominates_n(p.pair.better, p.pair.worse, 5).holds);
    } catch (const ExhaustionError&) {
    }
    CHECK_THROWS_AS(random_nsd_pair(3, sym, 2, 7, 0), ExhaustionError);
    CHECK_THROWS_AS(random_nsd_pair(3, sym, 1, 7), DomainError);
}

TEST_CASE("falsify finds the squared-weighting violation") {
    RduModel m{UtilityFunction::identity(sym), WeightingFunction::power(2.0)};
    auto r = falsify(m, 3, 100, 1);
    REQUIRE(r.violation);
    const auto& v = *r.violation;
    CHECK(v.gap > kViolationGap);
    CHECK(v.worse_value - v.better_value == v.gap);
    CHECK(dominates_n(v.better, v.worse, 3).holds);
    CHECK(tsd_gap(v.better, v.worse) <= 1e-8);
    CHECK(dual_eval(m.weighting, v.worse) == v.worse_value);
}

TEST_CASE("falsify is silent for consistent models") {
    const RduModel expected{UtilityFunction::identity(sym), WeightingFunction::identity()};
    CHECK_FALSE(falsify(expected, 3, 2000, 5).violation);
    for (int n = 3; n <= 5; ++n) {
        RduModel m{UtilityFunction::exponential(1.0, sym), WeightingFunction::lambda_jump(0.5)};
        auto r = falsify(m, n, 1000, 11);
        CHECK_FALSE(r.violation);
        CHECK(r.random_pairs + r.exhausted_trials == 1000);
    }
}

TEST_CASE("mixtures of mean and worst case stay consistent") {
    auto u = UtilityFunction::exponential(2.0, sym);
    for (double lambda : {0.2, 0.8}) {
        auto functional = [&](const DiscreteDistribution& d) {
            const double worst = d.min() * d.min() * d.min();  // increasing v(x) = x^3
            return lambda * d.expect([&](double x) { return u(x); }) + (1.0 - lambda) * worst;
        };
        for (int n = 3; n <= 4; ++n) CHECK_FALSE(falsify(functional, sym, n, 1000, 17).violation);
    }
}

TEST_CASE("falsify is deterministic") {
    RduModel m{UtilityFunction::identity(sym), WeightingFunction::power(1.5)};
    FalsifyOptions opts;
    opts.lemma_sweep = false;
    auto a = falsify(m, 2, 300, 99, opts);
    auto b = falsify(m, 2, 300, 99, opts);
    REQUIRE(a.violation.has_value() == b.violation.has_value());
    if (a.violation) {
        CHECK(a.violation->index == b.violation->index);
        CHECK(a.violation->worse == b.violation->worse);
        CHECK(a.violation->gap == b.violation->gap);
    }
    CHECK(a.random_pairs == b.random_pairs);
}
