#pragma once

#include <cmath>
#include <cstdint>

namespace urllc {

// Counter-based random stream. Each (seed, stream) pair yields an
// independent sequence that is a pure function of the draw counter, so
// Monte Carlo trials can be assigned to substreams (stream = trial index)
// and results do not depend on how trials are partitioned across workers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream ^ 0x6a09e667f3bcc909ULL))) {}

    std::uint64_t next_u64() { return mix(key_ ^ (counter_++ * 0x9e3779b97f4a7c15ULL)); }

    // Uniform in (0, 1].
    double next_double() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller, pairs cached.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_double();
        const double u2 = next_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        cached_ = mag * std::sin(ang);
        have_cached_ = true;
        return mag * std::cos(ang);
    }

private:
    // SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace urllc
