#pragma once

#include <cmath>
#include <cstdint>

namespace mrsim {

/// Counter-based RNG substream. Each (seed, stream id) pair addresses an
/// independent stream; draw n is a pure function of (key, n), so shot/window
/// substreams are reproducible under any work partitioning.
class Substream {
  public:
    Substream(std::uint64_t seed, std::uint64_t id_hi, std::uint64_t id_lo)
        : key_(mix(mix(mix(seed) ^ id_hi) ^ id_lo)) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

    /// uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Poisson draw by Knuth's product method, chunked so the running
    /// product stays away from the double underflow threshold.
    std::uint64_t poisson(double mean) {
        std::uint64_t n = 0;
        while (mean > 500.0) {
            n += poisson_chunk(500.0);
            mean -= 500.0;
        }
        return n + poisson_chunk(mean);
    }

    /// 64-bit finalizer (splitmix64); exposed for key derivation.
    static std::uint64_t mix(std::uint64_t z) {
        z += kGamma;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    std::uint64_t poisson_chunk(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t n = 0;
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Fixed stream-id tags so distinct purposes never share a substream.
namespace rng_tag {
inline constexpr std::uint64_t kQuantumShot = 0x71u;
inline constexpr std::uint64_t kClassicalShot = 0xC1u;
inline constexpr std::uint64_t kPhotonShot = 0xF0u;
inline constexpr std::uint64_t kBootstrap = 0xB5u;
inline constexpr std::uint64_t kSynthetic = 0x5Eu;
}  // namespace rng_tag

}  // namespace mrsim
