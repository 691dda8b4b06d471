#include "dnlat/diagnostics.hpp"

#include "dnlat/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dnlat {

double p_derivative_bound(const LatticeState& state, const ModelParams& params, const Forcing& forcing) {
    if (!(params.delta > 0.0)) throw std::invalid_argument("p_derivative_bound requires delta > 0");
    double damping = 0.0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        const double x = std::norm(state.amplitudes[i]);
        const double frac = x / (1.0 + x);
        damping += frac * frac;
    }
    return -2.0 * params.delta * damping + (2.0 / params.delta) * forcing.l2_sq;
}

bool uniform_bound_condition(const ModelParams& params, const Forcing& forcing) {
    return params.delta * params.delta < 3.0 * forcing.sum_pow_4_3;
}

AbsorbingEstimate absorbing_estimate(const ModelParams& params, const Forcing& forcing, double R,
                                     double r, RhsKind kind) {
    if (!(params.delta > 0.0)) throw std::invalid_argument("absorbing estimate requires delta > 0");
    if (!(R > 0.0)) throw std::invalid_argument("initial-ball radius R must be > 0");

    AbsorbingEstimate est;
    est.R = R;
    est.r = r;
    if (kind == RhsKind::DfDNLS) {
        est.decay_rate = params.delta;
        est.rho_sq = 4.0 / (params.delta * params.delta) * forcing.l2_sq;
    } else {
        // dfAL / combined: rate delta - 4 mu R^2, valid only when positive
        est.decay_rate = params.delta - 4.0 * params.mu * R * R;
        if (!(est.decay_rate > 0.0))
            throw HypothesisError("absorbing hypothesis violated: R^2 >= delta/(4 mu) "
                                  "(R^2 = " + std::to_string(R * R) +
                                  ", delta/(4 mu) = " + std::to_string(params.delta / (4.0 * params.mu)) + ")");
        est.rho_sq = (4.0 / params.delta) * forcing.l2_sq / est.decay_rate;
    }
    if (!(r > std::sqrt(est.rho_sq)))
        throw HypothesisError("absorbing radius r = " + std::to_string(r) +
                              " must exceed rho = " + std::to_string(std::sqrt(est.rho_sq)));

    if (R * R <= est.r * est.r) {
        est.t0 = 0.0;  // initial ball already inside B_r
    } else {
        est.t0 = std::log((R * R - est.rho_sq) / (r * r - est.rho_sq)) / est.decay_rate;
        if (est.t0 < 0.0) est.t0 = 0.0;
    }
    return est;
}

double gronwall_envelope(double initial_norm_sq, const AbsorbingEstimate& estimate, double t) {
    const double decay = std::exp(-estimate.decay_rate * t);
    return initial_norm_sq * decay + estimate.rho_sq * (1.0 - decay);
}

double tail_mass(const LatticeState& state, int K) {
    if (K < 0) throw std::invalid_argument("tail index K must be >= 0");
    if (2 * K >= state.n_half)
        throw std::invalid_argument("tail beyond 2K = " + std::to_string(2 * K) +
                                    " is not representable on a truncation with n_half = " +
                                    std::to_string(state.n_half));
    double sum = 0.0;
    for (int n = 2 * K + 1; n <= state.n_half; ++n)
        sum += std::norm(state.at(n)) + std::norm(state.at(-n));
    return sum;
}

double hausdorff_semidistance(const std::vector<LatticeState>& U, const std::vector<LatticeState>& V) {
    if (U.empty() || V.empty())
        throw std::invalid_argument("hausdorff semi-distance needs nonempty clouds");

    const Eigen::Index d = U.front().amplitudes.size();
    const Eigen::Index mu = static_cast<Eigen::Index>(U.size());
    const Eigen::Index mv = static_cast<Eigen::Index>(V.size());
    Eigen::MatrixXcd MU(d, mu), MV(d, mv);
    for (Eigen::Index i = 0; i < mu; ++i) {
        if (U[static_cast<std::size_t>(i)].amplitudes.size() != d)
            throw std::invalid_argument("cloud states have mismatched truncations");
        MU.col(i) = U[static_cast<std::size_t>(i)].amplitudes;
    }
    for (Eigen::Index j = 0; j < mv; ++j) {
        if (V[static_cast<std::size_t>(j)].amplitudes.size() != d)
            throw std::invalid_argument("cloud states have mismatched truncations");
        MV.col(j) = V[static_cast<std::size_t>(j)].amplitudes;
    }

    // ||u - v||^2 = ||u||^2 + ||v||^2 - 2 Re <u, v>, batched through one GEMM.
    // The expanded form carries cancellation error, so it only nominates
    // candidates; the winning pairs are re-evaluated with exact differences.
    const Eigen::VectorXd nu = MU.colwise().squaredNorm().real().transpose();
    const Eigen::VectorXd nv = MV.colwise().squaredNorm().real().transpose();
    const Eigen::MatrixXd cross = (MU.adjoint() * MV).real();

    double sup = 0.0;
    for (Eigen::Index i = 0; i < mu; ++i) {
        double approx_best = std::numeric_limits<double>::infinity();
        Eigen::Index jbest = 0;
        for (Eigen::Index j = 0; j < mv; ++j) {
            const double dsq = nu[i] + nv[j] - 2.0 * cross(i, j);
            if (dsq < approx_best) {
                approx_best = dsq;
                jbest = j;
            }
        }
        const double window = 64.0 * std::numeric_limits<double>::epsilon() * (nu[i] + nv[jbest] + 1.0);
        double best = (MU.col(i) - MV.col(jbest)).squaredNorm();
        for (Eigen::Index j = 0; j < mv; ++j) {
            if (j == jbest) continue;
            if (nu[i] + nv[j] - 2.0 * cross(i, j) <= approx_best + window)
                best = std::min(best, (MU.col(i) - MV.col(j)).squaredNorm());
        }
        if (best > sup) sup = best;
    }
    return std::sqrt(sup);
}

double hausdorff_semidistance(const AttractorCloud& U, const AttractorCloud& V) {
    return hausdorff_semidistance(U.states, V.states);
}

} // namespace dnlat
