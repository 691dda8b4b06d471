#include "dnlat/lipschitz.hpp"

#include "dnlat/forcing.hpp"
#include "dnlat/rhs.hpp"
#include "dnlat/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dnlat {

double nonlinear_lipschitz_bound(const ModelParams& params, double radius) {
    return std::sqrt(6.0 * params.mu * params.mu + 5.0 * params.gamma * params.gamma) * radius * radius;
}

double nonlinear_growth_bound(const ModelParams& params, double radius) {
    return std::sqrt(2.0 * params.mu * params.mu + params.gamma * params.gamma) * radius * radius;
}

LipschitzReport sample_lipschitz(const ModelParams& params, double radius, int n_samples,
                                 std::uint64_t rng_seed, int n_half) {
    if (!(radius > 0.0)) throw std::invalid_argument("lipschitz sampling radius must be > 0");
    if (n_samples < 1) throw std::invalid_argument("need at least one sample pair");

    LipschitzReport report;
    report.radius = radius;
    report.theoretical_constant = nonlinear_lipschitz_bound(params, radius);

    // ZeroPadding makes the truncated N identical to the infinite-lattice N
    // restricted to states supported on the truncation.
    const BoundaryPolicy bc = BoundaryPolicy::ZeroPadding;
    Forcing zero = realize_forcing(ForcingSpec{}, n_half);
    RhsEvaluator full(params, zero, RhsKind::Combined);

    Rng rng(rng_seed);
    StateVector fa, fb;
    for (int i = 0; i < n_samples; ++i) {
        const LatticeState a = sample_in_ball(n_half, radius, rng);
        const LatticeState b = sample_in_ball(n_half, radius, rng);
        const double gap = (a.amplitudes - b.amplitudes).norm();
        if (gap == 0.0) {
            ++report.skipped_degenerate;
            continue;
        }
        const StateVector na = eval_nonlinear_part(a.amplitudes, params, bc);
        const StateVector nb = eval_nonlinear_part(b.amplitudes, params, bc);
        report.sampled_max_ratio = std::max(report.sampled_max_ratio, (na - nb).norm() / gap);

        full(a.amplitudes, fa);
        full(b.amplitudes, fb);
        report.sampled_max_ratio_full = std::max(report.sampled_max_ratio_full, (fa - fb).norm() / gap);
        ++report.sample_count;
    }
    return report;
}

} // namespace dnlat
