#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "sdrdu/indices.hpp"

using namespace sdrdu;
using Catch::Approx;

namespace {
const Domain sym{-1.0, 1.0};

UtilityFunction slopes(double first, double second) {
    return UtilityFunction::piecewise_linear({0.0, 1.0, 2.0}, {0.0, first, first + second});
}

WeightingFunction weighting_slopes(double first, double second) {
    // two segments on [0, 1/2], [1/2, 1] with the given slope ratio, h(1) = 1
    const double mid = 0.5 * first / (0.5 * first + 0.5 * second);
    return WeightingFunction::piecewise_linear({0.0, 0.5, 1.0}, {0.0, mid, 1.0});
}

double value(const IndexValue& v) { return v.value.value(); }
}  // namespace

TEST_CASE("extended reals") {
    ExtendedReal two(2.0);
    ExtendedReal inf = ExtendedReal::infinity();
    CHECK(two <= inf);
    CHECK_FALSE(inf <= two);
    CHECK(inf <= inf);
    CHECK(two <= ExtendedReal(2.0));
    CHECK(inf.is_infinite());
    CHECK_THROWS(inf.value());
}

TEST_CASE("greediness") {
    CHECK(value(greediness(UtilityFunction::identity(sym))) == Approx(1.0).margin(1e-9));
    auto concave = greediness(slopes(2.0, 1.0));
    CHECK(value(concave) == 1.0);
    CHECK(concave.method == IndexMethod::exact_piecewise);
    CHECK(value(greediness(slopes(1.0, 2.0))) == 2.0);
    CHECK(value(greediness(slopes(1.0, 3.0))) == 3.0);
    // concave exponential: every later chord is flatter
    CHECK(value(greediness(UtilityFunction::exponential(1.0, sym))) == Approx(1.0).margin(1e-6));
    // convex power on [1/2, 2]: u'(b) / u'(a) = 4
    auto convex = greediness(UtilityFunction::power(2.0, Domain{0.5, 2.0}));
    CHECK(value(convex) == Approx(4.0).epsilon(1e-6));
    CHECK(convex.method == IndexMethod::grid_refined);
    CHECK_THROWS_AS(greediness(UtilityFunction::piecewise_linear({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5})),
                    ValidationError);
    CHECK_THROWS_AS(greediness(UtilityFunction::exponential(-1.0, sym)), ValidationError);
}

TEST_CASE("greediness agrees with the quadruple oracle") {
    for (auto [s1, s2] : {std::pair{1.0, 2.0}, {2.0, 1.0}, {1.0, 3.0}, {0.5, 4.0}}) {
        auto u = slopes(s1, s2);
        const double brute = oracle::quadruple_ratio([&](double x) { return u(x); }, 0.0, 2.0, 50, true);
        CHECK(value(greediness(u)) == Approx(brute).margin(1e-12));
    }
}

TEST_CASE("pessimism") {
    auto id = pessimism(WeightingFunction::identity());
    CHECK(value(id) == Approx(1.0).margin(1e-12));
    auto sq = pessimism(WeightingFunction::power(2.0));
    CHECK(value(sq) == Approx(2.0).margin(1e-5));
    CHECK(sq.method == IndexMethod::grid_refined);
    CHECK(pessimism(WeightingFunction::indicator_one()).value.is_infinite());
    // lambda s with a jump: s(1 - lambda s) / ((1 - s) lambda s) -> inf over s is at s -> 0
    CHECK(value(pessimism(WeightingFunction::lambda_jump(0.5))) == Approx(2.0).margin(1e-5));
    CHECK(value(pessimism(weighting_slopes(2.0, 1.0))) == Approx(0.5).margin(1e-12));
}

TEST_CASE("pessimism agrees with a grid oracle") {
    for (double gamma : {1.5, 2.0, 3.0}) {
        auto h = WeightingFunction::power(gamma);
        const double grid = oracle::pessimism_grid([&](double s) { return h(s); }, 200);
        const double lib = value(pessimism(h));
        CHECK(lib <= grid + 1e-12);
        CHECK(lib >= gamma - 1e-5);
        CHECK(lib == Approx(gamma).margin(1e-5));
    }
    // slopes 1/2 then 3/2: the infimum is the limit 3/2 at s -> 1, which a
    // grid only approaches from above
    auto pl = weighting_slopes(1.0, 3.0);
    const double lib = value(pessimism(pl));
    CHECK(lib == Approx(1.5).margin(1e-12));
    for (int n : {201, 2001, 20001}) {
        const double grid = oracle::pessimism_grid([&](double s) { return pl(s); }, n);
        CHECK(lib <= grid);
        CHECK(grid - lib <= 1.0 / n);
    }
}

TEST_CASE("q index") {
    CHECK(value(q_index(WeightingFunction::identity())) == Approx(1.0).margin(1e-9));
    CHECK(value(q_index(weighting_slopes(1.0, 2.0))) == Approx(1.0).margin(1e-12));
    CHECK(value(q_index(weighting_slopes(2.0, 1.0))) == Approx(0.5).margin(1e-12));
    for (auto [s1, s2] : {std::pair{2.0, 1.0}, {1.0, 2.0}, {3.0, 1.0}}) {
        auto h = weighting_slopes(s1, s2);
        const double brute = oracle::quadruple_ratio([&](double s) { return h(s); }, 0.0, 1.0, 51, false);
        CHECK(value(q_index(h)) == Approx(brute).margin(1e-12));
    }
}

TEST_CASE("monotone risk aversion condition") {
    CHECK(monotone_ra_condition(UtilityFunction::identity(sym), WeightingFunction::identity()));
    CHECK(monotone_ra_condition(slopes(1.0, 2.0), WeightingFunction::power(2.0)));
    CHECK_FALSE(monotone_ra_condition(slopes(1.0, 3.0), WeightingFunction::power(2.0)));
    CHECK(monotone_ra_condition(slopes(1.0, 30.0), WeightingFunction::indicator_one()));
}
