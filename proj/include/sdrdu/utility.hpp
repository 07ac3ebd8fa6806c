#pragma once

// Utility functions u on [a, b] with derivative access, and a checker for
// n-monotonicity: (-1)^{k-1} u^(k) >= 0 for k = 1..n-2 and
// g = (-1)^{n-1} u^(n-2) decreasing and convex (n = 1: u increasing).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdrdu/distribution.hpp"
#include "sdrdu/error.hpp"
#include "sdrdu/numerics.hpp"

namespace sdrdu {

inline constexpr int kMaxDerivativeOrder = 8;
/// Smoothness reported by forms that are C-infinity.
inline constexpr int kInfinitelySmooth = std::numeric_limits<int>::max();

namespace utility_form {
struct Identity {};
/// x^gamma
struct Power {
    double gamma;
};
/// -exp(-theta x)
struct Exponential {
    double theta;
};
/// -(pivot - x)_+^m
struct NegativePower {
    double pivot;
    int m;
};
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;
};
struct PiecewisePoly {
    PiecewisePolynomial poly;
};
}  // namespace utility_form

class UtilityFunction {
public:
    using Form = std::variant<utility_form::Identity, utility_form::Power, utility_form::Exponential,
                              utility_form::NegativePower, utility_form::PiecewiseLinear,
                              utility_form::PiecewisePoly>;

    static UtilityFunction identity(Domain d) { return UtilityFunction(utility_form::Identity{}, d); }

    static UtilityFunction power(double gamma, Domain d) {
        validate_domain(d);
        if (!std::isfinite(gamma) || gamma == 0.0) throw ValidationError("gamma", "must be finite and nonzero");
        if (gamma != std::floor(gamma) && d.lo < 0.0) {
            throw ValidationError("domain", "non-integer power requires a nonnegative domain");
        }
        if (gamma < 0.0 && d.lo <= 0.0) throw ValidationError("domain", "negative power requires a positive domain");
        return UtilityFunction(utility_form::Power{gamma}, d);
    }

    static UtilityFunction exponential(double theta, Domain d) {
        if (!std::isfinite(theta) || theta == 0.0) throw ValidationError("theta", "must be finite and nonzero");
        return UtilityFunction(utility_form::Exponential{theta}, d);
    }

    static UtilityFunction negative_power(double pivot, int m, Domain d) {
        validate_domain(d);
        if (!std::isfinite(pivot)) throw ValidationError("eta", "must be finite");
        if (m < 1 || m > kMaxDegree) throw ValidationError("m", "must lie in [1, 8]");
        if (!(pivot > d.lo)) throw ValidationError("eta", "must exceed the domain lower bound (u would be constant)");
        return UtilityFunction(utility_form::NegativePower{pivot, m}, d);
    }

    static UtilityFunction piecewise_linear(std::vector<double> breakpoints, std::vector<double> values) {
        if (breakpoints.size() != values.size()) {
            throw ValidationError("values", "length must match breakpoints");
        }
        if (breakpoints.size() < 2) throw ValidationError("breakpoints", "at least two breakpoints are required");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) throw ValidationError("values", "must be finite");
            if (!std::isfinite(breakpoints[i])) throw ValidationError("breakpoints", "must be finite");
            if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
                throw ValidationError("breakpoints", "must be strictly increasing");
            }
        }
        std::vector<Polynomial> pieces;
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            double dx = breakpoints[i + 1] - breakpoints[i];
            double slope = (values[i + 1] - values[i]) / dx;
            pieces.push_back(Polynomial({values[i] - slope * breakpoints[i], slope}));
        }
        PiecewisePolynomial poly(breakpoints, std::move(pieces));
        Domain d{breakpoints.front(), breakpoints.back()};
        return UtilityFunction(utility_form::PiecewiseLinear{std::move(breakpoints), std::move(values)}, d,
                               std::move(poly));
    }

    static UtilityFunction piecewise_poly(PiecewisePolynomial poly) {
        auto bps = poly.breakpoints();
        for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
            double l = poly.pieces()[i - 1](bps[i]);
            double r = poly.pieces()[i](bps[i]);
            if (std::abs(l - r) > 1e-9 * std::max(1.0, std::abs(l))) {
                throw ValidationError("pieces", "piecewise utility must be continuous");
            }
        }
        Domain d{poly.lower(), poly.upper()};
        auto copy = poly;
        return UtilityFunction(utility_form::PiecewisePoly{std::move(poly)}, d, std::move(copy));
    }

    const Form& form() const noexcept { return form_; }
    const Domain& domain() const noexcept { return domain_; }

    std::string_view form_name() const noexcept {
        static constexpr std::string_view names[] = {"identity",       "power",           "exponential",
                                                     "negative_power", "piecewise_linear", "piecewise_poly"};
        return names[form_.index()];
    }

    /// Piecewise-polynomial representation, when u has one.
    const std::optional<PiecewisePolynomial>& as_piecewise() const noexcept { return piecewise_; }

    double operator()(double x) const { return derivative(x, 0); }

    /// order-th derivative at x; at breakpoints of piecewise forms this is the
    /// right derivative (the left derivative at the upper domain end).
    double derivative(double x, int order) const { return eval(x, order, false); }

    /// order-th left derivative (right derivative at the lower domain end).
    double left_derivative(double x, int order) const { return eval(x, order, true); }

    /// Largest k such that u^(k) exists and is continuous on all of [a, b].
    int smoothness() const {
        struct Visitor {
            const UtilityFunction& self;
            int operator()(const utility_form::NegativePower& f) const {
                return f.pivot < self.domain_.hi ? f.m - 1 : kInfinitelySmooth;
            }
            int operator()(const utility_form::PiecewiseLinear&) const { return self.piecewise_smoothness(); }
            int operator()(const utility_form::PiecewisePoly&) const { return self.piecewise_smoothness(); }
            int operator()(const utility_form::Identity&) const { return kInfinitelySmooth; }
            int operator()(const utility_form::Power&) const { return kInfinitelySmooth; }
            int operator()(const utility_form::Exponential&) const { return kInfinitelySmooth; }
        };
        return std::visit(Visitor{*this}, form_);
    }

private:
    UtilityFunction(Form f, Domain d, std::optional<PiecewisePolynomial> pw = std::nullopt)
        : form_(std::move(f)), domain_(d), piecewise_(std::move(pw)) {
        validate_domain(domain_);
        if (piecewise_) {
            bool constant = true;
            double v0 = (*piecewise_)(domain_.lo);
            for (const auto& p : piecewise_->pieces()) {
                if (p.degree() > 0) constant = false;
                if (p(domain_.lo) != v0 && p.degree() == 0) constant = false;
            }
            if (constant) throw ValidationError("form", "utility must be nonconstant on [a, b]");
        }
    }

    int piecewise_smoothness() const {
        const auto& pw = *piecewise_;
        auto bps = pw.breakpoints();
        for (int k = 1; k <= kMaxDegree + 1; ++k) {
            for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
                double l = pw.pieces()[i - 1].derivative(k)(bps[i]);
                double r = pw.pieces()[i].derivative(k)(bps[i]);
                if (std::abs(l - r) > 1e-9 * std::max(1.0, std::abs(l))) return k - 1;
            }
        }
        return kInfinitelySmooth;
    }

    double eval(double x, int order, bool left) const {
        if (order < 0 || order > kMaxDerivativeOrder) throw DomainError("derivative order must lie in [0, 8]");
        if (!domain_.contains(x)) throw DomainError("utility evaluated outside its domain");
        if (piecewise_) {
            std::size_t idx = left && x > domain_.lo ? piecewise_->left_piece_index(x) : piecewise_->piece_index(x);
            return piecewise_->pieces()[idx].derivative(order)(x);
        }
        struct Visitor {
            double x;
            int order;
            bool left;
            double operator()(const utility_form::Identity&) const {
                return order == 0 ? x : (order == 1 ? 1.0 : 0.0);
            }
            double operator()(const utility_form::Power& f) const {
                double coef = 1.0;
                for (int j = 0; j < order; ++j) coef *= (f.gamma - j);
                if (coef == 0.0) return 0.0;
                return coef * std::pow(x, f.gamma - order);
            }
            double operator()(const utility_form::Exponential& f) const {
                return -std::pow(-f.theta, order) * std::exp(-f.theta * x);
            }
            double operator()(const utility_form::NegativePower& f) const {
                bool below = left ? x <= f.pivot : x < f.pivot;
                if (!below || order > f.m) return 0.0;
                double coef = 1.0;
                for (int j = 0; j < order; ++j) coef *= -(f.m - j);
                return -coef * std::pow(f.pivot - x, f.m - order);
            }
            double operator()(const utility_form::PiecewiseLinear&) const { return 0.0; }
            double operator()(const utility_form::PiecewisePoly&) const { return 0.0; }
        };
        return std::visit(Visitor{x, order, left}, form_);
    }

    Form form_;
    Domain domain_;
    std::optional<PiecewisePolynomial> piecewise_;
};

enum class CheckMethod { exact, numeric };

inline std::string_view to_string(CheckMethod m) { return m == CheckMethod::exact ? "exact" : "numeric"; }

/// Where an n-monotonicity check failed. `order` is the derivative order whose
/// sign condition broke: k in [1, n-2] for the sign block, n-1 when g is not
/// decreasing, n when g is not convex (order 1 for n = 1).
struct MonotonicityFailure {
    int order;
    double location;
    std::string condition;
};

struct MonotonicityReport {
    bool holds = true;
    std::optional<MonotonicityFailure> failing;
    CheckMethod method = CheckMethod::numeric;
};

namespace detail {

inline double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

inline MonotonicityReport monotone_exact(const UtilityFunction& u, int n, double tol) {
    const auto& pw = *u.as_piecewise();
    MonotonicityReport rep;
    rep.method = CheckMethod::exact;
    auto bps = pw.breakpoints();
    auto fail = [&](int order, double at, std::string what) {
        rep.holds = false;
        rep.failing = MonotonicityFailure{order, at, std::move(what)};
        return rep;
    };
    // Requires every polynomial s * p^(k) to be >= -tol on every piece.
    auto nonneg = [&](int k, double s) -> std::optional<double> {
        for (std::size_t i = 0; i < pw.size(); ++i) {
            auto q = s * pw.pieces()[i].derivative(k);
            auto m = polynomial_inf(q, bps[i], bps[i + 1]);
            if (m.value < -tol) return m.location;
        }
        return std::nullopt;
    };

    if (n == 1) {
        if (auto at = nonneg(1, 1.0)) return fail(1, *at, "u is not increasing");
        return rep;
    }
    for (int k = 1; k <= n - 2; ++k) {
        if (auto at = nonneg(k, sign_power(k - 1))) {
            return fail(k, *at, "(-1)^(k-1) u^(k) is negative");
        }
    }
    const double gs = sign_power(n - 1);
    const int g_order = n - 2;
    if (auto at = nonneg(g_order + 1, -gs)) return fail(n - 1, *at, "g = (-1)^(n-1) u^(n-2) is not decreasing");
    if (auto at = nonneg(g_order + 2, gs)) return fail(n, *at, "g = (-1)^(n-1) u^(n-2) is not convex");
    for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
        double left = gs * pw.pieces()[i - 1].derivative(g_order + 1)(bps[i]);
        double right = gs * pw.pieces()[i].derivative(g_order + 1)(bps[i]);
        if (left > right + tol) return fail(n, bps[i], "g has a concave kink");
    }
    return rep;
}

inline MonotonicityReport monotone_numeric(const UtilityFunction& u, int n, int grid_size, double tol) {
    MonotonicityReport rep;
    rep.method = CheckMethod::numeric;
    const Domain d = u.domain();
    std::vector<double> xs(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        xs[static_cast<std::size_t>(i)] = i + 1 == grid_size ? d.hi : d.lo + d.width() * i / (grid_size - 1);
    }
    auto fail = [&](int order, double at, std::string what) {
        rep.holds = false;
        rep.failing = MonotonicityFailure{order, at, std::move(what)};
        return rep;
    };
    if (n == 1) {
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (u(xs[i + 1]) - u(xs[i]) < -tol) return fail(1, xs[i], "u is not increasing");
        }
        return rep;
    }
    for (int k = 1; k <= n - 2; ++k) {
        for (double x : xs) {
            if (sign_power(k - 1) * u.derivative(x, k) < -tol) {
                return fail(k, x, "(-1)^(k-1) u^(k) is negative");
            }
        }
    }
    std::vector<double> g(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) g[i] = sign_power(n - 1) * u.derivative(xs[i], n - 2);
    // differences of g carry rounding error proportional to |g|
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double slack = tol + 4.0 * eps * (std::abs(g[i]) + std::abs(g[i + 1]));
        if (g[i + 1] - g[i] > slack) return fail(n - 1, xs[i], "g = (-1)^(n-1) u^(n-2) is not decreasing");
    }
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        double h1 = xs[i] - xs[i - 1];
        double h2 = xs[i + 1] - xs[i];
        double second = 2.0 * ((g[i + 1] - g[i]) / h2 - (g[i] - g[i - 1]) / h1) / (h1 + h2);
        const double scale = std::abs(g[i - 1]) + 2.0 * std::abs(g[i]) + std::abs(g[i + 1]);
        if (second < -(tol + 8.0 * eps * scale / (h1 * h2))) {
            return fail(n, xs[i], "g = (-1)^(n-1) u^(n-2) is not convex");
        }
    }
    return rep;
}

}  // namespace detail

inline constexpr int kDefaultMonotoneGrid = 1001;
inline constexpr double kDefaultMonotoneTol = 1e-9;

/// n-monotonicity of u. Piecewise-polynomial utilities are checked exactly by
/// per-piece sign analysis; closed forms are checked on a uniform grid.
/// Across breakpoints the convexity of g is judged from its one-sided slopes,
/// which does not require g to be differentiable there.
inline MonotonicityReport is_n_monotone(const UtilityFunction& u, int n, int grid_size = kDefaultMonotoneGrid,
                                        double tol = kDefaultMonotoneTol) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (grid_size < 3) throw DomainError("grid_size must be >= 3");
    if (n >= 3 && u.smoothness() < n - 2) {
        throw CapabilityError("n-monotonicity at n = " + std::to_string(n) + " needs u^(" +
                              std::to_string(n - 2) + ") but " + std::string(u.form_name()) +
                              " utility is only C^" + std::to_string(u.smoothness()));
    }
    if (n > kMaxDerivativeOrder) throw CapabilityError("derivatives are available up to order 8");
    if (u.as_piecewise()) return detail::monotone_exact(u, n, tol);
    return detail::monotone_numeric(u, n, grid_size, tol);
}

}  // namespace sdrdu
