#pragma once

// Probability weighting functions h: [0, 1] -> [0, 1], increasing with
// h(0) = 0 and h(1) = 1. Built-in forms may jump only at s = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "sdrdu/error.hpp"

namespace sdrdu {

namespace weighting_form {
struct Identity {};
/// s^gamma, gamma >= 1
struct Power {
    double gamma;
};
/// lambda * s for s < 1, 1 at s = 1
struct LambdaJump {
    double lambda;
};
/// 1{s = 1}
struct IndicatorOne {};
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;
};
}  // namespace weighting_form

class WeightingFunction {
public:
    using Form = std::variant<weighting_form::Identity, weighting_form::Power, weighting_form::LambdaJump,
                              weighting_form::IndicatorOne, weighting_form::PiecewiseLinear>;

    static WeightingFunction identity() { return WeightingFunction(weighting_form::Identity{}); }

    static WeightingFunction power(double gamma) {
        if (!std::isfinite(gamma) || gamma < 1.0) throw ValidationError("gamma", "must be >= 1");
        return WeightingFunction(weighting_form::Power{gamma});
    }

    static WeightingFunction lambda_jump(double lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda", "must lie in [0, 1]");
        return WeightingFunction(weighting_form::LambdaJump{lambda});
    }

    static WeightingFunction indicator_one() { return WeightingFunction(weighting_form::IndicatorOne{}); }

    static WeightingFunction piecewise_linear(std::vector<double> breakpoints, std::vector<double> values) {
        if (breakpoints.size() < 2) throw ValidationError("breakpoints", "at least two breakpoints are required");
        if (breakpoints.size() != values.size()) throw ValidationError("values", "length must match breakpoints");
        if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
            throw ValidationError("breakpoints", "must start at 0 and end at 1");
        }
        if (values.front() != 0.0 || values.back() != 1.0) {
            throw ValidationError("values", "must satisfy h(0) = 0 and h(1) = 1");
        }
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i - 1] < breakpoints[i])) {
                throw ValidationError("breakpoints", "must be strictly increasing");
            }
            if (!(values[i - 1] <= values[i])) throw ValidationError("values", "must be increasing");
        }
        return WeightingFunction(weighting_form::PiecewiseLinear{std::move(breakpoints), std::move(values)});
    }

    const Form& form() const noexcept { return form_; }

    std::string_view form_name() const noexcept {
        static constexpr std::string_view names[] = {"identity", "power", "lambda_jump", "indicator_one",
                                                     "piecewise_linear"};
        return names[form_.index()];
    }

    double operator()(double s) const {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("weighting evaluated outside [0, 1]");
        if (s == 1.0) return 1.0;
        return std::visit(Below{s}, form_);
    }

    /// lim_{s -> 1-} h(s).
    double left_limit_at_one() const { return std::visit(Below{1.0}, form_); }

    /// Right derivative on [0, 1); at s = 1 the left derivative of the
    /// continuous part.
    double slope(double s) const {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("weighting evaluated outside [0, 1]");
        struct Visitor {
            double s;
            double operator()(const weighting_form::Identity&) const { return 1.0; }
            double operator()(const weighting_form::Power& f) const { return f.gamma * std::pow(s, f.gamma - 1.0); }
            double operator()(const weighting_form::LambdaJump& f) const { return f.lambda; }
            double operator()(const weighting_form::IndicatorOne&) const { return 0.0; }
            double operator()(const weighting_form::PiecewiseLinear& f) const {
                std::size_t i = 0;
                while (i + 2 < f.breakpoints.size() && s >= f.breakpoints[i + 1]) ++i;
                return (f.values[i + 1] - f.values[i]) / (f.breakpoints[i + 1] - f.breakpoints[i]);
            }
        };
        return std::visit(Visitor{s}, form_);
    }

private:
    explicit WeightingFunction(Form f) : form_(std::move(f)) {}

    // Evaluation of the continuous part on [0, 1].
    struct Below {
        double s;
        double operator()(const weighting_form::Identity&) const { return s; }
        double operator()(const weighting_form::Power& f) const { return std::pow(s, f.gamma); }
        double operator()(const weighting_form::LambdaJump& f) const { return f.lambda * s; }
        double operator()(const weighting_form::IndicatorOne&) const { return 0.0; }
        double operator()(const weighting_form::PiecewiseLinear& f) const {
            std::size_t i = 0;
            while (i + 2 < f.breakpoints.size() && s > f.breakpoints[i + 1]) ++i;
            double t = (s - f.breakpoints[i]) / (f.breakpoints[i + 1] - f.breakpoints[i]);
            return f.values[i] + t * (f.values[i + 1] - f.values[i]);
        }
    };

    Form form_;
};

struct WeightingClassification {
    bool convex = false;
    bool continuous_below_one = true;
    bool continuous_at_one = true;
    std::optional<double> lambda_form;
};

inline constexpr int kDefaultWeightingGrid = 1001;

/// Convexity is judged from second differences of h on a uniform grid of
/// [0, 1) closed off by the left limit at 1, together with the requirement
/// that any jump at 1 is upward. With that convention a terminal upward jump
/// does not break convexity. The lambda form is detected when h(s)/s is
/// constant on (0, 1) to within 1e-12.
inline WeightingClassification classify_weighting(const WeightingFunction& h,
                                                  int grid_size = kDefaultWeightingGrid) {
    if (grid_size < 3) throw DomainError("grid_size must be >= 3");
    WeightingClassification out;
    const double left_one = h.left_limit_at_one();
    out.continuous_at_one = left_one == 1.0;
    // Every built-in form is continuous on [0, 1); piecewise-linear forms are
    // continuous by construction.
    out.continuous_below_one = true;

    std::vector<double> g(static_cast<std::size_t>(grid_size));
    const double step = 1.0 / (grid_size - 1);
    for (int i = 0; i + 1 < grid_size; ++i) g[static_cast<std::size_t>(i)] = h(i * step);
    g.back() = left_one;
    out.convex = left_one <= 1.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        if (g[i + 1] - 2.0 * g[i] + g[i - 1] < -1e-12) out.convex = false;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < grid_size; ++i) {
        double r = g[static_cast<std::size_t>(i)] / (i * step);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (hi - lo <= 1e-12 && h(1.0) == 1.0) out.lambda_form = 0.5 * (lo + hi);
    return out;
}

}  // namespace sdrdu
