// rng.hpp: reproducible per-realization random streams

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lscar {

/// Independent random stream for one disorder realization.
///
/// Stream layout: the engine is std::mt19937_64 seeded through std::seed_seq
/// with the four 32-bit words {seed.lo, seed.hi, stream.lo, stream.hi}. Both the
/// engine and seed_seq are fully specified by the standard, and the variate
/// transforms below are written out here rather than taken from <random>'s
/// distributions (whose algorithms are implementation-defined), so a given
/// (seed, stream) pair yields the same bits on every platform.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Box-Muller transform; variates are produced in
    /// pairs and the second one of each pair is returned on the next call.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lscar
