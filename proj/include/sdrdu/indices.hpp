#pragma once

// Chord-slope indices of utilities and weighting functions:
//
//   G_u = sup_{a <= x1 < x2 <= x3 < x4 <= b} slope_u(x3, x4) / slope_u(x1, x2)   (greediness)
//   P_h = inf_{0 < s < 1} [(1 - h(s)) / (1 - s)] / [h(s) / s]                    (pessimism)
//   Q_h = inf_{0 <= s1 < s2 <= s3 < s4 <= 1} slope_h(s3, s4) / slope_h(s1, s2)
//
// and the monotone risk aversion condition G_u <= P_h.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "sdrdu/error.hpp"
#include "sdrdu/numerics.hpp"
#include "sdrdu/utility.hpp"
#include "sdrdu/weighting.hpp"

namespace sdrdu {

/// A nonnegative real or +infinity. Infinity is an explicit state, never an
/// IEEE sentinel; `x <= infinity` holds for every x, infinity included.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr explicit ExtendedReal(double v) : value_(v) {}
    static constexpr ExtendedReal infinity() {
        ExtendedReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }

    double value() const {
        if (infinite_) throw DomainError("value() on an infinite index");
        return value_;
    }

    friend constexpr bool operator<=(const ExtendedReal& l, const ExtendedReal& r) noexcept {
        if (r.infinite_) return true;
        if (l.infinite_) return false;
        return l.value_ <= r.value_;
    }

    friend constexpr bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

enum class IndexMethod { exact_piecewise, grid_refined };

inline std::string_view to_string(IndexMethod m) {
    return m == IndexMethod::exact_piecewise ? "exact-piecewise" : "grid-refined";
}

/// Index value with the (approximate, for grid methods) attaining points:
/// (x1, x2, x3, x4) for chord indices, (s) for pessimism.
struct IndexValue {
    ExtendedReal value;
    std::vector<double> attainers;
    IndexMethod method = IndexMethod::exact_piecewise;
};

inline constexpr int kIndexGrid = 10000;

namespace detail {

/// Chord slopes of consecutive points.
inline std::vector<double> cell_slopes(const std::vector<double>& xs, const std::vector<double>& fs) {
    std::vector<double> s(xs.size() - 1);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) s[i] = (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
    return s;
}

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    return xs;
}

inline double golden_section(const std::function<double(double)>& f, double lo, double hi, bool maximize) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    auto better = [&](double u, double v) { return maximize ? f(u) > f(v) : f(u) < f(v); };
    for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
        if (better(c, d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    double mid = 0.5 * (a + b);
    double best = mid;
    for (double cand : {lo, hi}) {
        if (maximize ? f(cand) > f(best) : f(cand) < f(best)) best = cand;
    }
    return best;
}

/// Which of the two chord indices is being computed.
enum class ChordSense { sup_ratio, inf_ratio };

/// Exact chord index over segments with slopes `slopes` on `bps`: extremum
/// over segment pairs i <= j of slope_j / slope_i. A pair with zero earlier
/// slope and positive later slope gives +infinity; 0/0 pairs are skipped.
inline IndexValue chord_index_segments(const std::vector<double>& bps, const std::vector<double>& slopes,
                                       ChordSense sense) {
    IndexValue out;
    out.method = IndexMethod::exact_piecewise;
    bool have = false;
    double best = 0.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        for (std::size_t j = i; j < slopes.size(); ++j) {
            if (slopes[i] == 0.0) {
                if (slopes[j] > 0.0 && sense == ChordSense::sup_ratio) {
                    out.value = ExtendedReal::infinity();
                    out.attainers = {bps[i], bps[i + 1], bps[j], bps[j + 1]};
                    return out;
                }
                continue;
            }
            double r = slopes[j] / slopes[i];
            bool improves = !have || (sense == ChordSense::sup_ratio ? r > best : r < best);
            if (improves) {
                have = true;
                best = r;
                bi = i;
                bj = j;
            }
        }
    }
    if (!have) {
        out.value = sense == ChordSense::sup_ratio ? ExtendedReal(0.0) : ExtendedReal::infinity();
        return out;
    }
    out.value = ExtendedReal(best);
    if (bi == bj) {
        double mid = 0.5 * (bps[bi] + bps[bi + 1]);
        out.attainers = {bps[bi], mid, mid, bps[bi + 1]};
    } else {
        out.attainers = {bps[bi], bps[bi + 1], bps[bj], bps[bj + 1]};
    }
    return out;
}

/// Grid chord index for a function with derivative access. Cell chords give
/// the coarse extremum over ordered cell pairs; when the extremal pair uses
/// two distinct cells the ratio is refined by optimizing the derivative inside
/// each cell (chord slopes within a cell range over the derivative's values).
/// `jump_at_end` marks a discontinuity at `hi`; the last cell then cannot
/// serve as an earlier chord, since x2 <= x3 < x4 forces x2 < hi.
inline IndexValue chord_index_grid(const std::function<double(double)>& f,
                                   const std::function<double(double)>& df, double lo, double hi,
                                   ChordSense sense, bool jump_at_end = false, int grid = kIndexGrid) {
    IndexValue out;
    out.method = IndexMethod::grid_refined;
    auto xs = uniform_grid(lo, hi, grid);
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
    auto s = cell_slopes(xs, fs);

    const bool sup = sense == ChordSense::sup_ratio;
    // Running extremum of earlier slopes: min for sup_ratio, max for inf_ratio.
    double run = s[0];
    std::size_t run_idx = 0;
    bool have = false;
    double best = 0.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const bool usable_as_earlier = !(jump_at_end && j + 1 == s.size());
        if (usable_as_earlier && (sup ? s[j] < run : s[j] > run)) {
            run = s[j];
            run_idx = j;
        }
        if (run == 0.0) {
            if (sup && s[j] > 0.0) {
                out.value = ExtendedReal::infinity();
                out.attainers = {xs[run_idx], xs[run_idx + 1], xs[j], xs[j + 1]};
                return out;
            }
            continue;
        }
        double r = s[j] / run;
        if (!have || (sup ? r > best : r < best)) {
            have = true;
            best = r;
            bi = run_idx;
            bj = j;
        }
    }
    if (!have) {
        out.value = sup ? ExtendedReal(0.0) : ExtendedReal::infinity();
        return out;
    }
    if (bi != bj) {
        // Earlier chord: min derivative (sup) / max derivative (inf) in cell bi;
        // later chord: the opposite in cell bj.
        double pi = golden_section(df, xs[bi], xs[bi + 1], !sup);
        double pj = golden_section(df, xs[bj], xs[bj + 1], sup);
        double earlier = df(pi);
        double later = df(pj);
        if (earlier > 0.0 && std::isfinite(later)) {
            double r = later / earlier;
            if (sup ? r > best : r < best) best = r;
        }
        out.attainers = {xs[bi], xs[bi + 1], xs[bj], xs[bj + 1]};
    } else {
        double mid = 0.5 * (xs[bi] + xs[bi + 1]);
        out.attainers = {xs[bi], mid, mid, xs[bi + 1]};
    }
    out.value = ExtendedReal(best);
    return out;
}

inline void require_increasing(const UtilityFunction& u) {
    auto rep = is_n_monotone(u, 1, 2001, 1e-12);
    if (!rep.holds) throw ValidationError("utility", "greediness requires an increasing utility");
}

}  // namespace detail

/// Index of greediness of an increasing utility. Exact for piecewise-linear
/// utilities, grid-refined otherwise.
inline IndexValue greediness(const UtilityFunction& u) {
    detail::require_increasing(u);
    if (const auto* pl = std::get_if<utility_form::PiecewiseLinear>(&u.form())) {
        std::vector<double> slopes;
        for (std::size_t i = 0; i + 1 < pl->breakpoints.size(); ++i) {
            slopes.push_back((pl->values[i + 1] - pl->values[i]) / (pl->breakpoints[i + 1] - pl->breakpoints[i]));
        }
        return detail::chord_index_segments(pl->breakpoints, slopes, detail::ChordSense::sup_ratio);
    }
    const Domain d = u.domain();
    return detail::chord_index_grid([&](double x) { return u(x); }, [&](double x) { return u.derivative(x, 1); },
                                    d.lo, d.hi, detail::ChordSense::sup_ratio);
}

/// Q_h, the infimal later-to-earlier chord-slope ratio of h on [0, 1].
inline IndexValue q_index(const WeightingFunction& h) {
    if (const auto* pl = std::get_if<weighting_form::PiecewiseLinear>(&h.form())) {
        std::vector<double> slopes;
        for (std::size_t i = 0; i + 1 < pl->breakpoints.size(); ++i) {
            slopes.push_back((pl->values[i + 1] - pl->values[i]) / (pl->breakpoints[i + 1] - pl->breakpoints[i]));
        }
        return detail::chord_index_segments(pl->breakpoints, slopes, detail::ChordSense::inf_ratio);
    }
    return detail::chord_index_grid([&](double s) { return h(s); }, [&](double s) { return h.slope(s); }, 0.0, 1.0,
                                    detail::ChordSense::inf_ratio, h.left_limit_at_one() != 1.0);
}

namespace detail {

/// Pessimism objective s (1 - h) / ((1 - s) h); +infinity where h(s) = 0.
inline double pessimism_objective(const WeightingFunction& h, double s) {
    double hs = h(s);
    if (hs == 0.0) return std::numeric_limits<double>::infinity();
    return (s * (1.0 - hs)) / ((1.0 - s) * hs);
}

}  // namespace detail

/// Index of pessimism. The objective is taken as +infinity wherever h(s) = 0,
/// so h vanishing on all of (0, 1) gives +infinity.
///
/// Piecewise-linear h: on a piece h = c0 + c1 s the objective's stationary
/// points solve a quadratic, and the infimum over (0, 1) is the least of those
/// values, interior breakpoint values and the one-sided limits at 0 and 1.
/// Closed forms: a 10^4-point grid plus probes at 1e-7 from either end,
/// followed by golden-section refinement around the best point.
inline IndexValue pessimism(const WeightingFunction& h) {
    IndexValue out;
    auto objective = [&](double s) { return detail::pessimism_objective(h, s); };
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0.5;
    auto offer = [&](double v, double s) {
        if (v < best) {
            best = v;
            best_s = s;
        }
    };

    if (const auto* pl = std::get_if<weighting_form::PiecewiseLinear>(&h.form())) {
        out.method = IndexMethod::exact_piecewise;
        const auto& bp = pl->breakpoints;
        const auto& vs = pl->values;
        const std::size_t m = bp.size() - 1;
        const double first_slope = (vs[1] - vs[0]) / (bp[1] - bp[0]);
        const double last_slope = (vs[m] - vs[m - 1]) / (bp[m] - bp[m - 1]);
        // Limits at the ends: 1 / h'(0+) and h'(1-).
        if (first_slope > 0.0) offer(1.0 / first_slope, 0.0);
        if (std::isfinite(last_slope)) offer(last_slope, 1.0);
        for (std::size_t i = 1; i < m; ++i) offer(objective(bp[i]), bp[i]);
        for (std::size_t i = 0; i < m; ++i) {
            const double c1 = (vs[i + 1] - vs[i]) / (bp[i + 1] - bp[i]);
            const double c0 = vs[i] - c1 * bp[i];
            // N = (1 - c0) s - c1 s^2, D = c0 + (c1 - c0) s - c1 s^2; stationary
            // points are the roots of N' D - N D'.
            Polynomial num({0.0, 1.0 - c0, -c1});
            Polynomial den({c0, c1 - c0, -c1});
            Polynomial lhs = num.derivative() * den - num * den.derivative();
            const double lo = std::max(bp[i], 0.0);
            const double hi = std::min(bp[i + 1], 1.0);
            for (double r : roots_in_interval(lhs, lo, hi)) {
                if (r > 0.0 && r < 1.0) offer(objective(r), r);
            }
        }
    } else {
        out.method = IndexMethod::grid_refined;
        constexpr double probe = 1e-7;
        std::vector<double> ss;
        ss.push_back(probe);
        for (int i = 1; i < kIndexGrid; ++i) ss.push_back(static_cast<double>(i) / kIndexGrid);
        ss.push_back(1.0 - probe);
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            double v = objective(ss[i]);
            if (v < best) {
                best = v;
                best_s = ss[i];
                best_i = i;
            }
        }
        if (std::isfinite(best)) {
            double lo = ss[best_i == 0 ? 0 : best_i - 1];
            double hi = ss[std::min(best_i + 1, ss.size() - 1)];
            double s = detail::golden_section(objective, lo, hi, false);
            offer(objective(s), s);
        }
    }
    out.value = std::isfinite(best) ? ExtendedReal(best) : ExtendedReal::infinity();
    if (std::isfinite(best)) out.attainers = {best_s};
    return out;
}

/// G_u <= P_h with +infinity semantics.
inline bool monotone_ra_condition(const UtilityFunction& u, const WeightingFunction& h) {
    return greediness(u).value <= pessimism(h).value;
}

}  // namespace sdrdu
