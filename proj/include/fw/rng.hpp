#pragma once

#include <cstdint>
#include <random>

#include "fw/linalg.hpp"

namespace fw {

// Seeded generator with a fixed, portable output pipeline: std::mt19937_64
// (fully specified by the C++ standard) with hand-rolled uniform and
// Box-Muller transforms, so that traces are byte-stable across platforms.
// Standard-library distributions are deliberately avoided because their
// outputs are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (one value per call; the pair's second
    // half is cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Vector gaussian_vector(std::size_t n) {
        Vector v(n);
        for (auto& x : v) x = gaussian();
        return v;
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fw
