#pragma once

#include <cstdint>
#include <random>

namespace hyplab {

/// Seeded uniform generator with a platform-independent double mapping.
/// std::uniform_real_distribution is implementation-defined; taking the top
/// 53 bits of the mt19937_64 stream keeps sampled points identical across
/// standard libraries.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [lo, hi).
    double next(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace hyplab
