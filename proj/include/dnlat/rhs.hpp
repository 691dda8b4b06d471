#pragma once

#include "dnlat/errors.hpp"
#include "dnlat/forcing.hpp"
#include "dnlat/operators.hpp"
#include "dnlat/params.hpp"
#include "dnlat/state.hpp"

namespace dnlat {

// Effective (mu, gamma) after the kind selection: DfAL evaluates with
// gamma = 0, DfDNLS with mu = 0, Combined with both.
inline std::pair<double, double> effective_nonlinearity(const ModelParams& p, RhsKind kind) {
    switch (kind) {
        case RhsKind::DfAL: return {p.mu, 0.0};
        case RhsKind::DfDNLS: return {0.0, p.gamma};
        default: return {p.mu, p.gamma};
    }
}

// Evaluates F(phi) = -i (kappa + mu |phi|^2) (phi_{n+1} + phi_{n-1})
//                    - i gamma |phi|^2 phi - delta phi - i g
// for one model kind, reusing scratch buffers across calls.
class RhsEvaluator {
public:
    RhsEvaluator(const ModelParams& params, const Forcing& forcing, RhsKind kind)
        : params_(params), g_(forcing.values), bc_(params.boundary) {
        std::tie(mu_, gamma_) = effective_nonlinearity(params, kind);
    }

    int size() const { return static_cast<int>(g_.size()); }

    void operator()(const StateVector& phi, StateVector& out) const {
        detail::neighbor_sum_into(phi, bc_, shifted_);
        absq_ = phi.array().abs2();
        const Complex minus_i(0.0, -1.0);
        out.resize(phi.size());
        out.array() = minus_i * ((params_.kappa + mu_ * absq_).cast<Complex>() * shifted_.array() +
                                 (gamma_ * absq_).cast<Complex>() * phi.array() + g_.array()) -
                      params_.delta * phi.array();
    }

    double mu() const { return mu_; }
    double gamma() const { return gamma_; }
    const ModelParams& params() const { return params_; }

private:
    ModelParams params_;
    StateVector g_;
    BoundaryPolicy bc_;
    double mu_ = 0.0;
    double gamma_ = 0.0;
    mutable StateVector shifted_;
    mutable Eigen::ArrayXd absq_;
};

inline LatticeState eval_rhs(const LatticeState& state, const ModelParams& params,
                             const Forcing& forcing, RhsKind kind) {
    if (forcing.n_half != state.n_half)
        throw std::invalid_argument("forcing truncation does not match the state");
    RhsEvaluator rhs(params, forcing, kind);
    StateVector out;
    rhs(state.amplitudes, out);
    if (!out.allFinite())
        throw BlowUpError("non-finite right-hand side (blow-up signal)", 0.0);
    return LatticeState{std::move(out), state.n_half};
}

// Nonlinear part N(theta)_n = -i mu |theta_n|^2 (theta_{n+1} + theta_{n-1})
//                             - i gamma |theta_n|^2 theta_n
template <typename Derived>
StateVector eval_nonlinear_part(const Eigen::MatrixBase<Derived>& theta, const ModelParams& params,
                                BoundaryPolicy bc) {
    StateVector shifted;
    detail::neighbor_sum_into(theta, bc, shifted);
    Eigen::ArrayXd absq = theta.derived().array().abs2();
    const Complex minus_i(0.0, -1.0);
    StateVector out(theta.size());
    out.array() = minus_i * absq.cast<Complex>() *
                  (params.mu * shifted.array() + params.gamma * theta.derived().array());
    return out;
}

inline LatticeState eval_nonlinear_part(const LatticeState& state, const ModelParams& params) {
    return LatticeState{eval_nonlinear_part(state.amplitudes, params, params.boundary), state.n_half};
}

} // namespace dnlat
