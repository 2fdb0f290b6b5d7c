#pragma once

#include <cstdint>

#include "qdlab/geometry.hpp"

namespace qdlab {

// Counter-based stream: the state is derived from (seed, stream index) by
// avalanche mixing, so walk i draws the same variates no matter which thread
// runs it.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0x517cc1b727220a95ULL);
        state_ = mix(state_);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_angle() { return next_double() * kTwoPi; }

    Complex next_unit_vector() {
        const double a = next_angle();
        return {std::cos(a), std::sin(a)};
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace qdlab
