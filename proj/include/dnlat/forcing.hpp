#pragma once

#include "dnlat/state.hpp"

#include <string>

namespace dnlat {

enum class ForcingFamily { Zero, SingleSite, Gaussian, ExponentialDecay, CompactSupport };

const char* to_string(ForcingFamily f);
ForcingFamily forcing_family_from_string(const std::string& name);

// Parameters of a named forcing family; realized on a given truncation.
struct ForcingSpec {
    ForcingFamily family = ForcingFamily::Zero;
    double amplitude = 0.0;          // g_0 scale (real)
    double width = 1.0;              // Gaussian sigma / exponential decay length
    int support_half_width = 0;      // CompactSupport: g_n = amplitude for |n| <= this
};

// Realized forcing g = (g_n) on |n| <= n_half, with the two sums every
// estimate needs cached at construction.
struct Forcing {
    ForcingSpec spec;
    int n_half = 0;
    StateVector values;      // slot layout identical to LatticeState
    double l2_sq = 0.0;      // ||g||^2
    double sum_pow_4_3 = 0.0;  // sum |g_n|^{4/3}

    double l2() const { return std::sqrt(l2_sq); }
};

Forcing realize_forcing(const ForcingSpec& spec, int n_half);

// Same profile rescaled so that ||g|| == target_l2 (no-op on the Zero family
// unless target is 0; rescaling an identically zero forcing is an error).
Forcing scaled_to_l2(const Forcing& g, double target_l2);

} // namespace dnlat
