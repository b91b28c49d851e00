#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tpk {

/// SplitMix64 mixing step; used to derive independent stream seeds from a
/// master seed and a list of indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the stream identified by (master; i0, i1, i2). Streams are a
/// pure function of the indices, so parallel schedules cannot change them.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t i0, std::uint64_t i1 = 0,
                                 std::uint64_t i2 = 0) {
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    s = splitmix64(s ^ i0);
    s = splitmix64(s ^ i1);
    s = splitmix64(s ^ i2);
    return s;
}

/// Deterministic random stream. All transforms are written out explicitly
/// so results are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard exponential.
    double exponential() { return -std::log1p(-uniform()); }

    /// Normal via Box-Muller (no caching, two uniforms per draw).
    double normal(double mean = 0.0, double sd = 1.0) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        return mean + sd * radius * std::cos(2.0 * M_PI * u2);
    }

    /// Poisson count by summing unit exponentials up to the rate.
    int poisson(double rate) {
        int count = 0;
        double acc = exponential();
        while (acc <= rate) {
            ++count;
            acc += exponential();
        }
        return count;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tpk
