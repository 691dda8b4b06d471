#include "dnlat/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace dnlat {

const char* to_string(ForcingFamily f) {
    switch (f) {
        case ForcingFamily::Zero: return "zero";
        case ForcingFamily::SingleSite: return "single_site";
        case ForcingFamily::Gaussian: return "gaussian";
        case ForcingFamily::ExponentialDecay: return "exp_decay";
        default: return "compact";
    }
}

ForcingFamily forcing_family_from_string(const std::string& name) {
    if (name == "zero") return ForcingFamily::Zero;
    if (name == "single_site") return ForcingFamily::SingleSite;
    if (name == "gaussian") return ForcingFamily::Gaussian;
    if (name == "exp_decay") return ForcingFamily::ExponentialDecay;
    if (name == "compact") return ForcingFamily::CompactSupport;
    throw std::invalid_argument("unknown forcing family '" + name + "'");
}

namespace {

void refresh_cached_sums(Forcing& g) {
    g.l2_sq = 0.0;
    g.sum_pow_4_3 = 0.0;
    for (Eigen::Index i = 0; i < g.values.size(); ++i) {
        const double a = std::abs(g.values[i]);
        g.l2_sq += a * a;
        g.sum_pow_4_3 += std::pow(a, 4.0 / 3.0);
    }
}

} // namespace

Forcing realize_forcing(const ForcingSpec& spec, int n_half) {
    if (n_half < 0) throw std::invalid_argument("n_half must be >= 0");
    Forcing g;
    g.spec = spec;
    g.n_half = n_half;
    g.values = StateVector::Zero(2 * n_half + 1);

    switch (spec.family) {
        case ForcingFamily::Zero:
            break;
        case ForcingFamily::SingleSite:
            g.values[n_half] = spec.amplitude;
            break;
        case ForcingFamily::Gaussian: {
            if (!(spec.width > 0.0)) throw std::invalid_argument("gaussian forcing width must be > 0");
            const double inv = 1.0 / (2.0 * spec.width * spec.width);
            for (int n = -n_half; n <= n_half; ++n)
                g.values[n + n_half] = spec.amplitude * std::exp(-static_cast<double>(n) * n * inv);
            break;
        }
        case ForcingFamily::ExponentialDecay: {
            if (!(spec.width > 0.0)) throw std::invalid_argument("exponential forcing decay length must be > 0");
            for (int n = -n_half; n <= n_half; ++n)
                g.values[n + n_half] = spec.amplitude * std::exp(-std::abs(n) / spec.width);
            break;
        }
        case ForcingFamily::CompactSupport: {
            if (spec.support_half_width < 0)
                throw std::invalid_argument("compact forcing support half-width must be >= 0");
            const int s = std::min(spec.support_half_width, n_half);
            for (int n = -s; n <= s; ++n) g.values[n + n_half] = spec.amplitude;
            break;
        }
    }

    refresh_cached_sums(g);
    return g;
}

Forcing scaled_to_l2(const Forcing& g, double target_l2) {
    if (target_l2 < 0.0) throw std::invalid_argument("target l2 norm must be >= 0");
    Forcing out = g;
    if (target_l2 == 0.0) {
        out.values.setZero();
        out.l2_sq = 0.0;
        out.sum_pow_4_3 = 0.0;
        out.spec.amplitude = 0.0;
        return out;
    }
    const double cur = std::sqrt(g.l2_sq);
    if (cur == 0.0) throw std::invalid_argument("cannot rescale an identically zero forcing");
    const double factor = target_l2 / cur;
    out.values *= factor;
    out.spec.amplitude *= factor;
    refresh_cached_sums(out);
    return out;
}

} // namespace dnlat
