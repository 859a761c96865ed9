#pragma once

#include <cmath>
#include <cstdint>

namespace affdim {

// Counter-based stream generator (SplitMix64 walk keyed by seed and stream).
// Replica r of a run always draws from stream (seed, r), so results do not
// depend on how replicas are scheduled across workers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
        state_ = mix(state_ ^ 0xD1B54A32D192ED03ULL);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // uniform on (0,1), never exactly 0 or 1
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (two uniforms per pair, second cached)
    double gaussian() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        haveSpare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform01()); }

    // standard symmetric alpha-stable variate, Chambers-Mallows-Stuck.
    // Scale convention: characteristic function exp(-|theta|^alpha).
    double stable_standard(double alpha) {
        const double phi = 3.1415926535897932384626433832795 * (uniform01() - 0.5);
        if (alpha == 1.0) return std::tan(phi);
        const double w = exponential();
        const double s = std::sin(alpha * phi) / std::pow(std::cos(phi), 1.0 / alpha);
        return s * std::pow(std::cos((1.0 - alpha) * phi) / w, (1.0 - alpha) / alpha);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

}  // namespace affdim
