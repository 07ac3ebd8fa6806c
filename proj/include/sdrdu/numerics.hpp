#pragma once

// Polynomial and piecewise-polynomial primitives: real root isolation on an
// interval and exact extrema of piecewise polynomials.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdrdu/error.hpp"

namespace sdrdu {

inline constexpr int kMaxDegree = 8;
inline constexpr double kDefaultRootTol = 1e-10;

/// Real polynomial with ascending coefficients, degree at most kMaxDegree.
/// Trailing zero coefficients are trimmed so the leading coefficient is
/// nonzero unless the polynomial is identically zero.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
        for (double c : coeffs_) {
            if (!std::isfinite(c)) throw DomainError("polynomial coefficient is not finite");
        }
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
        if (degree() > kMaxDegree) {
            throw UnsupportedDegreeError("polynomial degree " + std::to_string(degree()) +
                                         " exceeds supported bound " +
                                         std::to_string(kMaxDegree));
        }
    }

    static Polynomial constant(double c) { return Polynomial({c}); }

    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Degree; the zero polynomial reports -1.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    std::span<const double> coefficients() const noexcept { return coeffs_; }

    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// Running-error bound for Horner evaluation at x.
    double evaluation_noise(double x) const noexcept {
        double mag = 0.0;
        double ax = std::abs(x);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) mag = mag * ax + std::abs(*it);
        return 4.0 * (degree() + 2) * std::numeric_limits<double>::epsilon() * mag;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
        return Polynomial(std::move(d));
    }

    Polynomial derivative(int order) const {
        Polynomial p = *this;
        for (int i = 0; i < order && !p.is_zero(); ++i) p = p.derivative();
        return order > 0 ? p : *this;
    }

    friend Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
        std::vector<double> out(std::max(lhs.coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) out[i] += lhs.coeffs_[i];
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) out[i] += rhs.coeffs_[i];
        return Polynomial(std::move(out));
    }

    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> out = p.coeffs_;
        for (double& c : out) c *= s;
        return Polynomial(std::move(out));
    }

    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
        if (lhs.is_zero() || rhs.is_zero()) return {};
        std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
        }
        return Polynomial(std::move(out));
    }

    friend Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs) {
        return lhs + (-1.0) * rhs;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

namespace detail {

inline int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

inline double bisect_root(const Polynomial& p, double lo, double hi, double tol) {
    int s_lo = sign_of(p(lo));
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        double mid = 0.5 * (lo + hi);
        double v = p(mid);
        if (v == 0.0) return mid;
        if (sign_of(v) == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline void merge_close(std::vector<double>& xs, double tol) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    }
    xs = std::move(out);
}

}  // namespace detail

/// Every real root of `p` in [lo, hi], ascending, each to absolute accuracy
/// `tol`. Multiple roots are reported once; the zero polynomial has none.
///
/// The interval is cut at the roots of p' (found recursively) so that p is
/// monotone on every sub-interval; sign changes are then bisected. Critical
/// points where |p| is below the evaluation noise are reported as (even
/// multiplicity) roots.
inline std::vector<double> roots_in_interval(const Polynomial& p, double lo, double hi,
                                             double tol = kDefaultRootTol) {
    if (!(lo < hi)) throw DomainError("roots_in_interval requires lo < hi");
    if (!(tol > 0.0)) throw DomainError("roots_in_interval requires tol > 0");
    if (p.degree() > kMaxDegree) throw UnsupportedDegreeError("degree above supported bound");
    if (p.degree() <= 0) return {};

    std::vector<double> roots;
    if (p.degree() == 1) {
        auto c = p.coefficients();
        double r = -c[0] / c[1];
        if (r >= lo && r <= hi) roots.push_back(r);
        return roots;
    }

    std::vector<double> cuts{lo};
    for (double c : roots_in_interval(p.derivative(), lo, hi, tol)) {
        if (c > lo && c < hi) cuts.push_back(c);
    }
    cuts.push_back(hi);

    auto near_zero = [&p](double x) { return std::abs(p(x)) <= p.evaluation_noise(x); };

    for (double c : cuts) {
        if (near_zero(c)) roots.push_back(c);
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double l = cuts[i];
        double r = cuts[i + 1];
        double fl = p(l);
        double fr = p(r);
        if (near_zero(l) || near_zero(r)) continue;
        if (detail::sign_of(fl) * detail::sign_of(fr) < 0) {
            roots.push_back(detail::bisect_root(p, l, r, tol));
        }
    }
    detail::merge_close(roots, tol);
    return roots;
}

/// Polynomial pieces on consecutive closed intervals [t_{i-1}, t_i].
/// Pieces are expressed in the global variable x.
class PiecewisePolynomial {
public:
    PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
        : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
        if (breakpoints_.size() < 2) {
            throw ValidationError("breakpoints", "at least two breakpoints are required");
        }
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!std::isfinite(breakpoints_[i])) {
                throw ValidationError("breakpoints", "breakpoints must be finite");
            }
            if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
                throw ValidationError("breakpoints", "breakpoints must be strictly increasing");
            }
        }
        if (pieces_.size() + 1 != breakpoints_.size()) {
            throw ValidationError("pieces", "number of pieces must equal number of breakpoints - 1");
        }
    }

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const Polynomial> pieces() const noexcept { return pieces_; }
    std::size_t size() const noexcept { return pieces_.size(); }
    double lower() const noexcept { return breakpoints_.front(); }
    double upper() const noexcept { return breakpoints_.back(); }

    /// Index of the piece used at x: the right piece at interior breakpoints,
    /// the last piece at the upper end.
    std::size_t piece_index(double x) const {
        check_in_span(x);
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
        idx = idx == 0 ? 0 : idx - 1;
        return std::min(idx, pieces_.size() - 1);
    }

    /// Index of the piece used for left limits: the left piece at interior
    /// breakpoints, the first piece at the lower end.
    std::size_t left_piece_index(double x) const {
        check_in_span(x);
        auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
        return idx == 0 ? 0 : std::min(idx - 1, pieces_.size() - 1);
    }

    double operator()(double x) const { return pieces_[piece_index(x)](x); }
    double left_value(double x) const { return pieces_[left_piece_index(x)](x); }

    PiecewisePolynomial derivative() const {
        std::vector<Polynomial> d;
        d.reserve(pieces_.size());
        for (const auto& p : pieces_) d.push_back(p.derivative());
        return {breakpoints_, std::move(d)};
    }

    PiecewisePolynomial operator-() const {
        std::vector<Polynomial> neg;
        neg.reserve(pieces_.size());
        for (const auto& p : pieces_) neg.push_back(-1.0 * p);
        return {breakpoints_, std::move(neg)};
    }

    int max_degree() const noexcept {
        int d = -1;
        for (const auto& p : pieces_) d = std::max(d, p.degree());
        return d;
    }

    void check_in_span(double x) const {
        if (!(x >= lower() && x <= upper())) {
            throw DomainError("point " + std::to_string(x) + " outside piecewise span [" +
                              std::to_string(lower()) + ", " + std::to_string(upper()) + "]");
        }
    }

private:
    std::vector<double> breakpoints_;
    std::vector<Polynomial> pieces_;
};

/// A point together with a value of interest there.
struct Extremum {
    double value;
    double location;
};

/// Candidate extremum locations of f on [lo, hi]: the interval ends, interior
/// breakpoints and stationary points of every piece. Each candidate is tagged
/// with the piece it belongs to; breakpoints appear once per adjacent piece.
inline std::vector<std::pair<double, std::size_t>> critical_points(const PiecewisePolynomial& f,
                                                                   double lo, double hi,
                                                                   double tol = kDefaultRootTol) {
    if (!(lo <= hi)) throw DomainError("critical_points requires lo <= hi");
    f.check_in_span(lo);
    f.check_in_span(hi);
    std::vector<std::pair<double, std::size_t>> out;
    auto bps = f.breakpoints();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double l = std::max(bps[i], lo);
        double r = std::min(bps[i + 1], hi);
        if (l > r) continue;
        out.emplace_back(l, i);
        if (l < r) {
            for (double c : roots_in_interval(f.pieces()[i].derivative(), l, r, tol)) {
                out.emplace_back(c, i);
            }
        }
        out.emplace_back(r, i);
    }
    return out;
}

/// Supremum of f over [lo, hi] and the (leftmost) point attaining it. Exact up
/// to root tolerance since extrema of a polynomial piece occur at its
/// endpoints or stationary points.
inline Extremum piecewise_sup(const PiecewisePolynomial& f, double lo, double hi) {
    Extremum best{-std::numeric_limits<double>::infinity(), lo};
    for (auto [x, i] : critical_points(f, lo, hi)) {
        double v = f.pieces()[i](x);
        if (v > best.value || (v == best.value && x < best.location)) best = {v, x};
    }
    return best;
}

inline Extremum piecewise_inf(const PiecewisePolynomial& f, double lo, double hi) {
    Extremum best{std::numeric_limits<double>::infinity(), lo};
    for (auto [x, i] : critical_points(f, lo, hi)) {
        double v = f.pieces()[i](x);
        if (v < best.value || (v == best.value && x < best.location)) best = {v, x};
    }
    return best;
}

/// Infimum of a single polynomial over [lo, hi].
inline Extremum polynomial_inf(const Polynomial& p, double lo, double hi) {
    if (lo == hi) return {p(lo), lo};
    return piecewise_inf(PiecewisePolynomial({lo, hi}, {p}), lo, hi);
}

/// (x - c)^k expanded in ascending powers of x.
inline Polynomial shifted_power(double c, int k) {
    if (k < 0) throw DomainError("shifted_power requires k >= 0");
    std::vector<double> coeffs(static_cast<std::size_t>(k) + 1, 0.0);
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        coeffs[static_cast<std::size_t>(j)] = binom * std::pow(-c, k - j);
        binom = binom * (k - j) / (j + 1);
    }
    return Polynomial(std::move(coeffs));
}

}  // namespace sdrdu
