#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace funclearn {

/// splitmix64 finalizer; the engine-independent mixing primitive used for
/// seed derivation throughout the project.
inline std::uint64_t hash64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

/// Order-sensitive combine: fold a value into a running hash.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return hash64(h + 0x9E3779B97F4A7C15ull + v);
}

/// Deterministic random stream: mt19937_64 (fully specified by the standard)
/// plus hand-rolled double draws, so identical seeds give identical draws on
/// every platform. Distributions from <random> are implementation-defined and
/// are deliberately not used.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Box-Muller; consumes exactly two engine draws per value.
    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    /// Uniform integer in [0, bound). Modulo bias is ~2^-64 and irrelevant here.
    std::uint64_t uniform_index(std::uint64_t bound) { return engine_() % bound; }

private:
    std::mt19937_64 engine_;
};

} // namespace funclearn
