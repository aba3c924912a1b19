#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pollwir {

/// Seeded random source with a fully pinned output sequence.
///
/// std::mt19937_64 itself is specified bit-for-bit by the standard, but the
/// std::*_distribution adaptors are not, so this class does its own variate
/// generation:
///   - uniform01(): next engine output >> 11, scaled by 2^-53  -> [0, 1)
///   - gaussian(): Box-Muller on two uniform draws (both values used)
/// Identical seeds therefore produce identical streams on every conforming
/// implementation.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Uniform in (lo, hi] (maps u in [0,1) to hi - u*(hi-lo)).
    double uniform_open_closed(double lo, double hi) {
        return hi - uniform01() * (hi - lo);
    }

    /// Gaussian via Box-Muller; the spare deviate is cached so draws come in
    /// a fixed order regardless of how callers interleave them.
    double gaussian(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        // u1 in (0, 1] keeps the log argument positive.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * pi() * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + stddev * r * std::cos(theta);
    }

    std::uint64_t next_raw() { return engine_(); }

    static constexpr double pi() { return 3.14159265358979323846; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pollwir
