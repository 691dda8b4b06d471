#pragma once

#include "dnlat/forcing.hpp"
#include "dnlat/params.hpp"
#include "dnlat/state.hpp"

#include <vector>

namespace dnlat {

// P = sum_n ln(1 + |psi_n|^2). Finite P controls the l^2 norm and is the
// conserved quantity of the undamped, unforced AL flow at mu = 1.
template <typename Derived>
double p_functional(const Eigen::MatrixBase<Derived>& psi) {
    double p = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) p += std::log1p(std::norm(psi.derived()[i]));
    return p;
}

inline double p_functional(const LatticeState& s) { return p_functional(s.amplitudes); }

// Right-hand side of the dP/dt estimate:
//   -2 delta sum_n (|psi_n|^2 / (1 + |psi_n|^2))^2 + (2/delta) ||g||^2
double p_derivative_bound(const LatticeState& state, const ModelParams& params, const Forcing& forcing);

// delta^2 < 3 sum |g_n|^{4/3}; sufficient-condition gate for the monotone
// norm bound of the dfAL (not necessary).
bool uniform_bound_condition(const ModelParams& params, const Forcing& forcing);

// Closed-form absorbing-ball data. For the dfAL (and the combined system)
// the decay rate is delta - 4 mu R^2 under the hypothesis R^2 < delta/(4 mu);
// for the dfDNLS it is delta.
struct AbsorbingEstimate {
    double rho_sq = 0.0;      // asymptotic bound on ||.||^2
    double r = 0.0;           // chosen absorbing radius, r > sqrt(rho_sq)
    double R = 0.0;           // initial-ball radius
    double t0 = 0.0;          // guaranteed entry time into B_r
    double decay_rate = 0.0;
};

AbsorbingEstimate absorbing_estimate(const ModelParams& params, const Forcing& forcing, double R,
                                     double r, RhsKind kind);

// ||phi(t)||^2 envelope: initial * exp(-rate t) + rho^2 (1 - exp(-rate t)).
double gronwall_envelope(double initial_norm_sq, const AbsorbingEstimate& estimate, double t);

// sum_{|n| > 2K} |psi_n|^2. Requires 0 <= 2K < n_half.
double tail_mass(const LatticeState& state, int K);

// Finite sample of post-burn-in trajectory states, the desk-scale surrogate
// for an attractor.
struct AttractorCloud {
    std::vector<LatticeState> states;
    std::vector<double> sample_times;
    double burn_in = 0.0;
    RhsKind system = RhsKind::Combined;
};

// dist(U, V) = sup_{u in U} inf_{v in V} ||u - v||_{l2}, brute force over
// the finite samples. Asymmetric.
double hausdorff_semidistance(const AttractorCloud& U, const AttractorCloud& V);
double hausdorff_semidistance(const std::vector<LatticeState>& U, const std::vector<LatticeState>& V);

} // namespace dnlat
