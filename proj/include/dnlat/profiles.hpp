#pragma once

#include "dnlat/rng.hpp"
#include "dnlat/state.hpp"

#include <string>

namespace dnlat {

enum class ProfileFamily { Zero, SingleSite, Gaussian, Sech, CompactBlock, RandomBall };

const char* to_string(ProfileFamily f);
ProfileFamily profile_family_from_string(const std::string& name);

struct ProfileSpec {
    ProfileFamily family = ProfileFamily::Gaussian;
    double amplitude = 1.0;
    double width = 3.0;            // Gaussian sigma / sech scale
    int support_half_width = 4;    // CompactBlock
    double phase_gradient = 0.0;   // optional e^{i q n} factor
    std::uint64_t seed = 1;        // RandomBall
};

LatticeState realize_profile(const ProfileSpec& spec, int n_half);

// Copies rescaled to a target norm. Rescaling the zero state to a nonzero
// target is an error.
LatticeState scaled_to_l2(const LatticeState& s, double target);
LatticeState scaled_to_l1(const LatticeState& s, double target);

} // namespace dnlat
