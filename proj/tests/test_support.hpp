#pragma once

#include <cmath>
#include <cstdint>

#include "qfq/propagators.hpp"

// genuinely relative comparison; doctest's Approx defaults to scale = 1, which
// silently turns epsilon into an absolute tolerance for small magnitudes
#define CHECK_REL(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol)*std::abs(b))

namespace qfq::testing {

// deterministic generator so frozen expectations stay frozen
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((next_u64() >> 11) * 0x1.0p-53);
    }
};

// random bundle satisfying every GreensBundle invariant (Cauchy-Schwarz pair,
// positivity, gamma consistency)
inline GreensBundle random_physical_bundle(Rng& rng) {
    GreensBundle g;
    g.gK_AA = rng.uniform(0.0, 1.2);
    g.gK_BB = rng.uniform(0.0, 1.2);
    const double cs = std::sqrt(g.gK_AA * g.gK_BB);
    g.gK_BA = rng.uniform(-0.98, 0.98) * cs;
    const double room = 2.0 * std::sqrt(std::max(0.0, g.gK_AA * g.gK_BB - g.gK_BA * g.gK_BA));
    const double diff = rng.uniform(-0.98, 0.98) * room;
    const double common = rng.uniform(-2.0, 2.0);
    g.gR_BA = common + 0.5 * diff;
    g.gR_AB = common - 0.5 * diff;
    g.gamma_a = std::exp(-2.0 * g.gK_AA);
    g.gamma_b = std::exp(-2.0 * g.gK_BB);
    return g;
}

}  // namespace qfq::testing
