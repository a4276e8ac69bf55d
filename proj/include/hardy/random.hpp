#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace hardy {

// SplitMix64: tiny, deterministic across platforms, good enough for test
// instance generation. Not for cryptography.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Deterministic per-trial seed derivation.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ull * (trial + 1)));
    return g.next();
}

/// n draws of exp(U(lo, hi)): log-uniform positive values for seeded instances.
inline std::vector<double> log_uniform(SplitMix64& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = std::exp(rng.uniform(lo, hi));
    return v;
}

}  // namespace hardy
