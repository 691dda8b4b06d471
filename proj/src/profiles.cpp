#include "dnlat/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace dnlat {

const char* to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::Zero: return "zero";
        case ProfileFamily::SingleSite: return "single_site";
        case ProfileFamily::Gaussian: return "gaussian";
        case ProfileFamily::Sech: return "sech";
        case ProfileFamily::CompactBlock: return "compact";
        default: return "random_ball";
    }
}

ProfileFamily profile_family_from_string(const std::string& name) {
    if (name == "zero") return ProfileFamily::Zero;
    if (name == "single_site") return ProfileFamily::SingleSite;
    if (name == "gaussian") return ProfileFamily::Gaussian;
    if (name == "sech") return ProfileFamily::Sech;
    if (name == "compact") return ProfileFamily::CompactBlock;
    if (name == "random_ball") return ProfileFamily::RandomBall;
    throw std::invalid_argument("unknown profile family '" + name + "'");
}

LatticeState realize_profile(const ProfileSpec& spec, int n_half) {
    if (n_half < 0) throw std::invalid_argument("n_half must be >= 0");
    LatticeState s = zero_state(n_half);

    switch (spec.family) {
        case ProfileFamily::Zero:
            break;
        case ProfileFamily::SingleSite:
            s.at(0) = spec.amplitude;
            break;
        case ProfileFamily::Gaussian: {
            if (!(spec.width > 0.0)) throw std::invalid_argument("gaussian profile width must be > 0");
            const double inv = 1.0 / (2.0 * spec.width * spec.width);
            for (int n = -n_half; n <= n_half; ++n)
                s.at(n) = spec.amplitude * std::exp(-static_cast<double>(n) * n * inv);
            break;
        }
        case ProfileFamily::Sech: {
            if (!(spec.width > 0.0)) throw std::invalid_argument("sech profile width must be > 0");
            for (int n = -n_half; n <= n_half; ++n)
                s.at(n) = spec.amplitude / std::cosh(n / spec.width);
            break;
        }
        case ProfileFamily::CompactBlock: {
            if (spec.support_half_width < 0)
                throw std::invalid_argument("compact profile support half-width must be >= 0");
            const int w = std::min(spec.support_half_width, n_half);
            for (int n = -w; n <= w; ++n) s.at(n) = spec.amplitude;
            break;
        }
        case ProfileFamily::RandomBall: {
            Rng rng(spec.seed);
            s = sample_in_ball(n_half, std::abs(spec.amplitude), rng);
            break;
        }
    }

    if (spec.phase_gradient != 0.0) {
        for (int n = -n_half; n <= n_half; ++n)
            s.at(n) *= std::polar(1.0, spec.phase_gradient * n);
    }
    return s;
}

LatticeState scaled_to_l2(const LatticeState& s, double target) {
    if (target < 0.0) throw std::invalid_argument("target norm must be >= 0");
    const double cur = l2_norm(s);
    if (cur == 0.0) {
        if (target == 0.0) return s;
        throw std::invalid_argument("cannot rescale the zero state to a nonzero norm");
    }
    return LatticeState{(target / cur) * s.amplitudes, s.n_half};
}

LatticeState scaled_to_l1(const LatticeState& s, double target) {
    if (target < 0.0) throw std::invalid_argument("target norm must be >= 0");
    const double cur = l1_norm(s);
    if (cur == 0.0) {
        if (target == 0.0) return s;
        throw std::invalid_argument("cannot rescale the zero state to a nonzero norm");
    }
    return LatticeState{(target / cur) * s.amplitudes, s.n_half};
}

} // namespace dnlat
