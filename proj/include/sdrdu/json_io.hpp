#pragma once

// JSON encodings of the toolkit's inputs and results.
//
//   distribution: {"domain": [a, b], "support": [...], "probs": [...]}
//   utility:      {"form": "...", "params": {...}, "domain": [a, b]}
//   weighting:    {"form": "...", "params": {...}}

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdrdu/distribution.hpp"
#include "sdrdu/dominance.hpp"
#include "sdrdu/error.hpp"
#include "sdrdu/indices.hpp"
#include "sdrdu/lab.hpp"
#include "sdrdu/utility.hpp"
#include "sdrdu/weighting.hpp"

namespace sdrdu::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ValidationError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    return v.get<double>();
}

inline int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
    return v.get<int>();
}

inline std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Domain domain(const json& v, const std::string& path) {
    auto ab = numbers(v, path);
    if (ab.size() != 2) throw ValidationError(path, "expected [a, b]");
    Domain d{ab[0], ab[1]};
    try {
        validate_domain(d);
    } catch (const ValidationError& e) {
        throw ValidationError(path, e.message());
    }
    return d;
}

inline const json& params(const json& obj, const std::string& path) {
    static const json empty = json::object();
    auto it = obj.find("params");
    if (it == obj.end()) return empty;
    if (!it->is_object()) throw ValidationError(path + ".params", "expected an object");
    return *it;
}

/// Re-raises validation errors from constructors with the JSON path prefixed.
template <typename F>
auto with_path(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ValidationError& e) {
        throw ValidationError(path + "." + e.field(), e.message());
    }
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

inline DiscreteDistribution distribution_from_json(const json& j, const std::string& path = "$") {
    auto d = detail::domain(detail::require(j, "domain", path), path + ".domain");
    auto xs = detail::numbers(detail::require(j, "support", path), path + ".support");
    auto ps = detail::numbers(detail::require(j, "probs", path), path + ".probs");
    return detail::with_path(path, [&] { return make_discrete(d, xs, ps); });
}

inline json to_json(const DiscreteDistribution& d) {
    return json{{"domain", {d.domain().lo, d.domain().hi}},
                {"support", std::vector<double>(d.support().begin(), d.support().end())},
                {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
}

inline UtilityFunction utility_from_json(const json& j, const std::string& path = "$") {
    const auto& form_v = detail::require(j, "form", path);
    if (!form_v.is_string()) throw ValidationError(path + ".form", "expected a string");
    const auto form = form_v.get<std::string>();
    const auto& p = detail::params(j, path);
    const std::string pp = path + ".params";
    if (form == "piecewise_linear") {
        auto bps = detail::numbers(detail::require(p, "breakpoints", pp), pp + ".breakpoints");
        auto vals = detail::numbers(detail::require(p, "values", pp), pp + ".values");
        return detail::with_path(pp, [&] { return UtilityFunction::piecewise_linear(bps, vals); });
    }
    if (form == "piecewise_poly") {
        auto bps = detail::numbers(detail::require(p, "breakpoints", pp), pp + ".breakpoints");
        const auto& pieces_v = detail::require(p, "pieces", pp);
        if (!pieces_v.is_array()) throw ValidationError(pp + ".pieces", "expected an array of coefficient arrays");
        std::vector<Polynomial> pieces;
        for (std::size_t i = 0; i < pieces_v.size(); ++i) {
            const std::string ip = pp + ".pieces[" + std::to_string(i) + "]";
            auto coeffs = detail::numbers(pieces_v[i], ip);
            try {
                pieces.emplace_back(std::move(coeffs));
            } catch (const Error& e) {
                throw ValidationError(ip, e.what());
            }
        }
        return detail::with_path(pp, [&] { return UtilityFunction::piecewise_poly(PiecewisePolynomial(bps, pieces)); });
    }
    const auto d = detail::domain(detail::require(j, "domain", path), path + ".domain");
    if (form == "identity") return UtilityFunction::identity(d);
    if (form == "power") {
        double g = detail::number(detail::require(p, "gamma", pp), pp + ".gamma");
        return detail::with_path(pp, [&] { return UtilityFunction::power(g, d); });
    }
    if (form == "exponential") {
        double t = detail::number(detail::require(p, "theta", pp), pp + ".theta");
        return detail::with_path(pp, [&] { return UtilityFunction::exponential(t, d); });
    }
    if (form == "negative_power") {
        double e = detail::number(detail::require(p, "eta", pp), pp + ".eta");
        int m = detail::integer(detail::require(p, "m", pp), pp + ".m");
        return detail::with_path(pp, [&] { return UtilityFunction::negative_power(e, m, d); });
    }
    throw ValidationError(path + ".form", "unknown utility form '" + form + "'");
}

inline json to_json(const UtilityFunction& u) {
    json params = json::object();
    if (const auto* f = std::get_if<utility_form::Power>(&u.form())) params["gamma"] = f->gamma;
    if (const auto* f = std::get_if<utility_form::Exponential>(&u.form())) params["theta"] = f->theta;
    if (const auto* f = std::get_if<utility_form::NegativePower>(&u.form())) {
        params["eta"] = f->pivot;
        params["m"] = f->m;
    }
    if (const auto* f = std::get_if<utility_form::PiecewiseLinear>(&u.form())) {
        params["breakpoints"] = f->breakpoints;
        params["values"] = f->values;
    }
    if (const auto* f = std::get_if<utility_form::PiecewisePoly>(&u.form())) {
        params["breakpoints"] = std::vector<double>(f->poly.breakpoints().begin(), f->poly.breakpoints().end());
        json pieces = json::array();
        for (const auto& piece : f->poly.pieces()) {
            pieces.push_back(std::vector<double>(piece.coefficients().begin(), piece.coefficients().end()));
        }
        params["pieces"] = pieces;
    }
    return json{{"form", std::string(u.form_name())},
                {"params", params},
                {"domain", {u.domain().lo, u.domain().hi}}};
}

inline WeightingFunction weighting_from_json(const json& j, const std::string& path = "$") {
    const auto& form_v = detail::require(j, "form", path);
    if (!form_v.is_string()) throw ValidationError(path + ".form", "expected a string");
    const auto form = form_v.get<std::string>();
    const auto& p = detail::params(j, path);
    const std::string pp = path + ".params";
    if (form == "identity") return WeightingFunction::identity();
    if (form == "indicator_one") return WeightingFunction::indicator_one();
    if (form == "power") {
        double g = detail::number(detail::require(p, "gamma", pp), pp + ".gamma");
        return detail::with_path(pp, [&] { return WeightingFunction::power(g); });
    }
    if (form == "lambda_jump") {
        double l = detail::number(detail::require(p, "lambda", pp), pp + ".lambda");
        return detail::with_path(pp, [&] { return WeightingFunction::lambda_jump(l); });
    }
    if (form == "piecewise_linear") {
        auto bps = detail::numbers(detail::require(p, "breakpoints", pp), pp + ".breakpoints");
        auto vals = detail::numbers(detail::require(p, "values", pp), pp + ".values");
        return detail::with_path(pp, [&] { return WeightingFunction::piecewise_linear(bps, vals); });
    }
    throw ValidationError(path + ".form", "unknown weighting form '" + form + "'");
}

inline json to_json(const WeightingFunction& h) {
    json params = json::object();
    if (const auto* f = std::get_if<weighting_form::Power>(&h.form())) params["gamma"] = f->gamma;
    if (const auto* f = std::get_if<weighting_form::LambdaJump>(&h.form())) params["lambda"] = f->lambda;
    if (const auto* f = std::get_if<weighting_form::PiecewiseLinear>(&h.form())) {
        params["breakpoints"] = f->breakpoints;
        params["values"] = f->values;
    }
    return json{{"form", std::string(h.form_name())}, {"params", params}};
}

inline json to_json(const DominanceVerdict& v) {
    json witness = nullptr;
    if (v.witness) {
        if (const auto* w = std::get_if<IntegralWitness>(&*v.witness)) {
            witness = json{{"kind", "integral"}, {"eta", w->eta}, {"gap", w->gap}};
        } else {
            const auto& m = std::get<MomentWitness>(*v.witness);
            witness = json{{"kind", "moment"}, {"k", m.k}, {"gap", m.gap}};
        }
    }
    return json{{"holds", v.holds},     {"order", v.order},     {"tol", v.tol},
                {"max_gap", v.max_gap}, {"marginal", v.marginal}, {"witness", witness}};
}

inline json to_json(const LemmaConstructionParams& p) {
    return json{{"n", p.n_param}, {"alpha", p.alpha}, {"epsilon", p.epsilon},
                {"y", p.y},       {"z", p.z},         {"domain", {p.domain.lo, p.domain.hi}}};
}

inline json to_json(const Violation& v) {
    return json{{"order", v.order},
                {"source", v.source},
                {"index", v.index},
                {"worse", to_json(v.worse)},
                {"better", to_json(v.better)},
                {"worse_value", v.worse_value},
                {"better_value", v.better_value},
                {"gap", v.gap},
                {"dominance", to_json(v.verdict)},
                {"lemma_params", v.lemma ? to_json(*v.lemma) : json(nullptr)}};
}

inline json to_json(const ExtendedReal& v) { return v.is_infinite() ? json("inf") : json(v.value()); }

inline json to_json(const IndexValue& v) {
    return json{{"value", to_json(v.value)}, {"attainers", v.attainers}, {"method", std::string(to_string(v.method))}};
}

}  // namespace sdrdu::io
