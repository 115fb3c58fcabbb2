#pragma once

#include <cstdint>
#include <random>

namespace privbr {

/// splitmix64 step; the standard finalizer used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based seed split: sub-stream `index` of `base`. Adding trials or
/// streams never perturbs the seeds of earlier ones.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 1));
}

/// Deterministic uniform source. mt19937_64 is fully specified by the
/// standard, and the [0,1) mapping below avoids std::uniform_real_distribution
/// (whose output is implementation-defined), so sequences are identical on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in the open interval (0,1): (k + 0.5) * 2^-53.
    /// Never returns 0 or 1, so log() on it is always finite.
    double uniform_open() {
        const std::uint64_t k = engine_() >> 11; // top 53 bits
        return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace privbr
