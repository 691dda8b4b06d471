#pragma once

#include "dnlat/state.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace dnlat {

// Deterministic RNG layer. Distributions are pinned here instead of using
// std::<distribution> so that seeded runs are byte-stable across standard
// libraries (manifest replay relies on this).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives an independent stream seed from a master seed, so ensemble jobs
// are reproducible regardless of thread scheduling.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Gaussian direction on the unit sphere of the truncated space.
inline StateVector random_direction(int n_half, Rng& rng) {
    StateVector v(2 * n_half + 1);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
    const double n = v.norm();
    if (n == 0.0) {
        v.setZero();
        v[n_half] = 1.0;
        return v;
    }
    return v / n;
}

// Uniform sample from the ball of radius R: uniform direction, radius
// R * u^(1/d) with d = 2*(2N+1) the real dimension of the truncated space.
inline LatticeState sample_in_ball(int n_half, double radius, Rng& rng) {
    const double d = 2.0 * (2.0 * n_half + 1.0);
    const double r = radius * std::pow(rng.uniform01(), 1.0 / d);
    return LatticeState{r * random_direction(n_half, rng), n_half};
}

} // namespace dnlat
