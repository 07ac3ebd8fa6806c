#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "sdrdu/distribution.hpp"
#include "sdrdu/random.hpp"

using namespace sdrdu;
using Catch::Approx;

namespace {
const Domain unit{0.0, 1.0};
const Domain sym{-1.0, 1.0};

DiscreteDistribution coin() { return make_discrete(unit, {0.0, 1.0}, {0.5, 0.5}); }
}  // namespace

TEST_CASE("construction normalizes, sorts and merges") {
    auto single = make_discrete(unit, {0.5}, {1.0});
    CHECK(single.size() == 1);
    CHECK(single.support()[0] == 0.5);
    CHECK(single.probs()[0] == 1.0);

    auto merged = make_discrete(unit, {0.2, 0.2}, {0.5, 0.5});
    REQUIRE(merged.size() == 1);
    CHECK(merged.support()[0] == 0.2);
    CHECK(merged.probs()[0] == 1.0);

    auto sorted = make_discrete(unit, {0.7, 0.3}, {2.0, 2.0});
    REQUIRE(sorted.size() == 2);
    CHECK(sorted.support()[0] == 0.3);
    CHECK(sorted.support()[1] == 0.7);
    CHECK(sorted.probs()[0] == 0.5);
    CHECK(sorted.probs()[1] == 0.5);

    auto dropped = make_discrete(unit, {0.1, 0.4}, {0.0, 3.0});
    CHECK(dropped.size() == 1);
    CHECK(dropped.support()[0] == 0.4);
}

TEST_CASE("construction errors name the field") {
    auto field_of = [](auto&& f) {
        try {
            f();
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("none");
    };
    CHECK(field_of([] { make_discrete(unit, {}, {}); }) == "support");
    CHECK(field_of([] { make_discrete(unit, {0.5}, {0.5, 0.5}); }) == "probs");
    CHECK(field_of([] { make_discrete(unit, {1.5}, {1.0}); }) == "support");
    CHECK(field_of([] { make_discrete(unit, {0.5}, {-1.0}); }) == "probs");
    CHECK(field_of([] { make_discrete(unit, {0.5}, {0.0}); }) == "probs");
    CHECK(field_of([] { make_discrete(Domain{1.0, 0.0}, {0.5}, {1.0}); }) == "domain");
    CHECK(field_of([] { make_discrete(unit, {NAN}, {1.0}); }) == "support");
}

TEST_CASE("point masses") {
    auto z = point_mass(sym, 0.0);
    CHECK(z.size() == 1);
    CHECK(z.support()[0] == 0.0);
    CHECK(z.probs()[0] == 1.0);
    auto one = point_mass(unit, 1.0);
    CHECK(one.min() == 1.0);
    CHECK(one.max() == 1.0);
    CHECK_THROWS_AS(point_mass(Domain{0.0, 2.0}, 3.0), DomainError);
}

TEST_CASE("mixtures") {
    auto d = coin();
    CHECK(mix({{1.0, d}}) == d);
    auto m = mix({{0.5, point_mass(unit, 0.0)}, {0.5, point_mass(unit, 1.0)}});
    CHECK(m == coin());

    // a half-half mixture with the point mass at the lower bound halves every
    // other atom and moves the rest of the mass to a
    auto x = make_discrete(unit, {0.2, 0.6, 1.0}, {0.25, 0.25, 0.5});
    auto xp = mix({{0.5, point_mass(unit, 0.0)}, {0.5, x}});
    for (double eta : {0.0, 0.1, 0.2, 0.5, 0.6, 0.99, 1.0}) {
        CHECK(xp.cdf(eta) == Approx(0.5 + 0.5 * x.cdf(eta)).margin(1e-15));
    }
    CHECK_THROWS_AS(mix({{0.4, d}, {0.4, d}}), ValidationError);
    CHECK_THROWS_AS(mix({{0.5, d}, {0.5, point_mass(sym, 0.0)}}), ValidationError);
}

TEST_CASE("cdf, survival and quantiles") {
    auto c = point_mass(unit, 0.3);
    CHECK(c.cdf(0.3) == 1.0);
    CHECK(c.cdf(std::nextafter(0.3, 0.0)) == 0.0);
    CHECK(c.survival(0.3) == 0.0);

    auto d = coin();
    CHECK(d.left_quantile(0.5) == 0.0);
    CHECK(d.left_quantile(0.50001) == 1.0);
    CHECK(d.left_quantile(1.0) == 1.0);
    CHECK_THROWS_AS(d.left_quantile(0.0), DomainError);
    CHECK_THROWS_AS(d.left_quantile(1.5), DomainError);
    CHECK(d.mean() == 0.5);
}

TEST_CASE("cdf reaches exactly one at the largest atom") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        auto d = random_distribution(rng, sym, 40);
        CHECK(d.cdf(d.max()) == 1.0);
        CHECK(d.cdf(1.0) == 1.0);
        double total = std::accumulate(d.probs().begin(), d.probs().end(), 0.0);
        CHECK(std::abs(total - 1.0) <= 1e-12);
        for (std::size_t i = 1; i < d.size(); ++i) CHECK(d.support()[i - 1] < d.support()[i]);
    }
}

TEST_CASE("lower partial moments") {
    auto c = point_mass(sym, 0.25);
    for (double eta : {-1.0, 0.0, 0.25, 0.5, 1.0}) {
        for (int k = 1; k <= 4; ++k) {
            CHECK(lower_partial_moment(c, eta, k) == Approx(std::pow(std::max(eta - 0.25, 0.0), k)));
        }
    }
    CHECK(lower_partial_moment(coin(), 1.0, 1) == 0.5);
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        auto d = random_distribution(rng, sym, 10);
        for (int k = 1; k <= 5; ++k) CHECK(lower_partial_moment(d, -1.0, k) == 0.0);
    }
    CHECK_THROWS_AS(lower_partial_moment(coin(), 0.5, -1), DomainError);
}

TEST_CASE("shifts and independent sums") {
    auto d = make_discrete(sym, {-0.5, 0.0}, {0.5, 0.5});
    auto s = shifted(d, 0.25);
    CHECK(s.support()[0] == -0.25);
    CHECK(s.support()[1] == 0.25);
    CHECK_THROWS_AS(shifted(d, 1.1), ValidationError);

    auto noise = make_discrete(sym, {-0.25, 0.25}, {0.5, 0.5});
    auto sum = independent_sum(d, noise);
    CHECK(sum.size() == 3);
    CHECK(sum.mean() == Approx(d.mean()));
    CHECK(sum.probs()[1] == 0.5);
}

TEST_CASE("random distributions are reproducible") {
    Rng a = Rng::substream(42, 7);
    Rng b = Rng::substream(42, 7);
    auto x = random_distribution(a, sym, 6);
    auto y = random_distribution(b, sym, 6);
    CHECK(x == y);
    CHECK(x.size() >= 2);
    CHECK(x.size() <= 6);
}
