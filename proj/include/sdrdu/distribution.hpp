#pragma once

// Finitely supported probability distributions on a bounded interval [a, b].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdrdu/error.hpp"

namespace sdrdu {

inline constexpr double kProbabilityTol = 1e-12;

/// Closed interval [lo, hi] with lo < hi.
struct Domain {
    double lo;
    double hi;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
    friend bool operator==(const Domain&, const Domain&) = default;
};

inline void validate_domain(const Domain& d) {
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) {
        throw ValidationError("domain", "bounds must be finite");
    }
    if (!(d.lo < d.hi)) throw ValidationError("domain", "requires a < b");
}

/// Discrete distribution: strictly increasing support with positive masses
/// summing to one. Immutable once built; construct through make_discrete or
/// point_mass.
class DiscreteDistribution {
public:
    const Domain& domain() const noexcept { return domain_; }
    std::span<const double> support() const noexcept { return support_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return support_.size(); }

    /// Right-continuous distribution function F(eta) = P(X <= eta).
    double cdf(double eta) const noexcept {
        auto end = std::upper_bound(support_.begin(), support_.end(), eta);
        auto n = static_cast<std::size_t>(end - support_.begin());
        if (n == support_.size()) return 1.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += probs_[i];
        return acc;
    }

    double survival(double eta) const noexcept { return 1.0 - cdf(eta); }

    /// Left quantile inf{x : F(x) >= s} for s in (0, 1].
    double left_quantile(double s) const {
        if (!(s > 0.0 && s <= 1.0)) throw DomainError("left_quantile requires s in (0, 1]");
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < support_.size(); ++i) {
            acc += probs_[i];
            if (acc >= s) return support_[i];
        }
        return support_.back();
    }

    double min() const noexcept { return support_.front(); }
    double max() const noexcept { return support_.back(); }

    double mean() const noexcept { return expect([](double x) { return x; }); }

    /// E[f(X)] by direct summation.
    template <typename F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) acc += probs_[i] * f(support_[i]);
        return acc;
    }

    friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

private:
    friend DiscreteDistribution make_discrete(Domain, std::vector<double>, std::vector<double>);

    DiscreteDistribution(Domain d, std::vector<double> xs, std::vector<double> ps)
        : domain_(d), support_(std::move(xs)), probs_(std::move(ps)) {}

    Domain domain_;
    std::vector<double> support_;
    std::vector<double> probs_;
};

/// Validates, sorts, merges duplicate outcomes, drops zero-mass atoms and
/// normalizes to total mass one.
inline DiscreteDistribution make_discrete(Domain domain, std::vector<double> support,
                                          std::vector<double> probs) {
    validate_domain(domain);
    if (support.empty()) throw ValidationError("support", "must be nonempty");
    if (support.size() != probs.size()) {
        throw ValidationError("probs", "length must match support length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!std::isfinite(support[i])) throw ValidationError("support", "values must be finite");
        if (!domain.contains(support[i])) {
            throw ValidationError("support", "value " + std::to_string(support[i]) +
                                                 " outside domain [" + std::to_string(domain.lo) +
                                                 ", " + std::to_string(domain.hi) + "]");
        }
        if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
            throw ValidationError("probs", "probabilities must be finite and nonnegative");
        }
        total += probs[i];
    }
    if (!(total > 0.0)) throw ValidationError("probs", "probabilities sum to zero");

    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return support[l] < support[r]; });

    std::vector<double> xs;
    std::vector<double> ps;
    for (std::size_t idx : order) {
        if (probs[idx] == 0.0) continue;
        if (!xs.empty() && xs.back() == support[idx]) {
            ps.back() += probs[idx];
        } else {
            xs.push_back(support[idx]);
            ps.push_back(probs[idx]);
        }
    }
    for (double& p : ps) p /= total;
    return DiscreteDistribution(domain, std::move(xs), std::move(ps));
}

inline DiscreteDistribution point_mass(Domain domain, double c) {
    validate_domain(domain);
    if (!domain.contains(c)) throw DomainError("point mass location outside domain");
    return make_discrete(domain, {c}, {1.0});
}

/// Weighted mixture of distributions sharing one domain; weights in (0, 1]
/// summing to one.
inline DiscreteDistribution mix(std::span<const std::pair<double, DiscreteDistribution>> components) {
    if (components.empty()) throw ValidationError("components", "mixture needs at least one component");
    const Domain domain = components.front().second.domain();
    double wsum = 0.0;
    std::vector<double> xs;
    std::vector<double> ps;
    for (const auto& [w, d] : components) {
        if (!(w > 0.0 && w <= 1.0)) throw ValidationError("weights", "each weight must lie in (0, 1]");
        if (!(d.domain() == domain)) throw ValidationError("domain", "mixture components must share a domain");
        wsum += w;
        for (std::size_t i = 0; i < d.size(); ++i) {
            xs.push_back(d.support()[i]);
            ps.push_back(w * d.probs()[i]);
        }
    }
    if (std::abs(wsum - 1.0) > kProbabilityTol) throw ValidationError("weights", "weights must sum to 1");
    return make_discrete(domain, std::move(xs), std::move(ps));
}

inline DiscreteDistribution mix(std::initializer_list<std::pair<double, DiscreteDistribution>> components) {
    return mix(std::span<const std::pair<double, DiscreteDistribution>>(components.begin(), components.size()));
}

/// Distribution of X + c on the same domain.
inline DiscreteDistribution shifted(const DiscreteDistribution& d, double c) {
    std::vector<double> xs(d.support().begin(), d.support().end());
    for (double& x : xs) x += c;
    return make_discrete(d.domain(), std::move(xs), {d.probs().begin(), d.probs().end()});
}

/// Distribution of X + Z for independent X and Z, on X's domain.
inline DiscreteDistribution independent_sum(const DiscreteDistribution& x, const DiscreteDistribution& z) {
    std::vector<double> xs;
    std::vector<double> ps;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < z.size(); ++j) {
            xs.push_back(x.support()[i] + z.support()[j]);
            ps.push_back(x.probs()[i] * z.probs()[j]);
        }
    }
    return make_discrete(x.domain(), std::move(xs), std::move(ps));
}

/// E[(eta - X)_+^k]. For k = 0 the integrand is the strict indicator
/// 1{eta > x}, so an atom at eta contributes nothing.
inline double lower_partial_moment(const DiscreteDistribution& d, double eta, int k) {
    if (k < 0) throw DomainError("lower_partial_moment requires k >= 0");
    if (k > 8) throw DomainError("lower_partial_moment supports k <= 8");
    double acc = 0.0;
    auto xs = d.support();
    auto ps = d.probs();
    for (std::size_t i = 0; i < xs.size() && xs[i] < eta; ++i) {
        double gap = eta - xs[i];
        double term = 1.0;
        for (int j = 0; j < k; ++j) term *= gap;
        acc += ps[i] * term;
    }
    return acc;
}

}  // namespace sdrdu
