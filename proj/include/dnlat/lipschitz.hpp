#pragma once

#include "dnlat/params.hpp"

#include <cstdint>

namespace dnlat {

// Closed-form bound sqrt(6 mu^2 + 5 gamma^2) * R^2 on the l^2 Lipschitz
// ratio of the nonlinear part N over the ball B_R.
double nonlinear_lipschitz_bound(const ModelParams& params, double radius);

// Closed-form bound sqrt(2 mu^2 + gamma^2) * R^2 on ||N(theta)|| / ||theta||
// over B_R.
double nonlinear_growth_bound(const ModelParams& params, double radius);

struct LipschitzReport {
    double radius = 0.0;
    double theoretical_constant = 0.0;  // bound for the nonlinear part N
    double sampled_max_ratio = 0.0;     // max ||N(a)-N(b)|| / ||a-b|| observed
    double sampled_max_ratio_full = 0.0;  // same ratio for the full F (reported only)
    long sample_count = 0;
    long skipped_degenerate = 0;
};

// Draws pairs uniformly from B_R (seeded) and records the worst difference
// quotient of N, plus the same quotient for the full right-hand side F.
LipschitzReport sample_lipschitz(const ModelParams& params, double radius, int n_samples,
                                 std::uint64_t rng_seed, int n_half = 32);

} // namespace dnlat
