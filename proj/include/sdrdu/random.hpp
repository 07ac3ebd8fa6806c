#pragma once

// Deterministic random streams. Every consumer derives its generator from a
// (seed, index) pair so results never depend on evaluation order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sdrdu/distribution.hpp"

namespace sdrdu {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// mt19937_64 with portable uniform and integer draws (the std::
/// distributions are implementation-defined, which would break byte-stable
/// reports across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent substream for item `index` of a run seeded with `seed`.
    static Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
        return splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    /// Standard exponential.
    double exponential() { return -std::log1p(-uniform()); }

    /// Symmetric Dirichlet(1) sample of the given dimension.
    std::vector<double> simplex(std::size_t dim) {
        std::vector<double> w(dim);
        double total = 0.0;
        for (double& v : w) {
            v = exponential();
            total += v;
        }
        if (!(total > 0.0)) return std::vector<double>(dim, 1.0 / static_cast<double>(dim));
        for (double& v : w) v /= total;
        return w;
    }

private:
    std::mt19937_64 engine_;
};

/// Atom count uniform on [2, atom_budget], outcomes uniform on the domain,
/// masses from a symmetric simplex draw.
inline DiscreteDistribution random_distribution(Rng& rng, Domain domain, int atom_budget) {
    const int atoms = rng.uniform_int(2, std::max(2, atom_budget));
    std::vector<double> xs(static_cast<std::size_t>(atoms));
    for (double& x : xs) x = rng.uniform(domain.lo, domain.hi);
    auto ps = rng.simplex(xs.size());
    return make_discrete(domain, std::move(xs), std::move(ps));
}

}  // namespace sdrdu
