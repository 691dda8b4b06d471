#pragma once

#include "dnlat/errors.hpp"
#include "dnlat/forcing.hpp"
#include "dnlat/params.hpp"
#include "dnlat/state.hpp"

#include <functional>
#include <vector>

namespace dnlat {

enum class StepperScheme { RK4Fixed, RK45Adaptive };

const char* to_string(StepperScheme s);

struct StepperConfig {
    StepperScheme scheme = StepperScheme::RK4Fixed;
    double dt = 0.01;        // fixed-step size
    double atol = 1e-10;     // adaptive absolute tolerance
    double rtol = 1e-10;     // adaptive relative tolerance
    double dt_min = 1e-10;
    double dt_max = 1.0;
    double t_end = 10.0;
    double sample_every = 0.1;   // diagnostic cadence
    std::vector<int> tail_ks;    // tail masses recorded per sample

    void validate() const;
};

// Time series of diagnostics along one integration.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> l2;
    std::vector<double> l4;
    std::vector<double> linf;
    std::vector<double> p;             // sum ln(1 + |psi_n|^2)
    std::vector<int> tail_ks;
    std::vector<std::vector<double>> tails;  // tails[i][j] = tail mass for tail_ks[i] at sample j
    LatticeState final_state;

    std::size_t samples() const { return times.size(); }
};

using SampleObserver = std::function<void(double t, const StateVector& state)>;

// Advances phi' = F(phi) to t_end, recording diagnostics at the configured
// cadence (plus t_end). Throws BlowUpError on a non-finite state and
// StepUnderflowError when the adaptive controller would need dt < dt_min.
TrajectoryRecord integrate(const LatticeState& initial, const ModelParams& params,
                           const Forcing& forcing, RhsKind kind, const StepperConfig& config,
                           const SampleObserver& observer = {});

// Stationary solution of the linear system (mu = gamma = 0, delta > 0):
// solves -i kappa Delta phi - delta phi - i g = 0 on the truncation.
LatticeState linear_fixed_point(const ModelParams& params, const Forcing& forcing);

struct ConvergenceReport {
    std::vector<double> dts;
    std::vector<double> errors;   // l2 error at t_end against the tiny-step reference
    double fitted_order = 0.0;    // NaN when errors are non-monotone or vanish
    bool monotone = false;
};

// Richardson-style order fit for the fixed-step scheme: integrates at each
// dt (halving sequence, >= 3 entries) and compares against the same scheme
// at min(dt)/64.
ConvergenceReport convergence_order(const LatticeState& initial, const ModelParams& params,
                                    const Forcing& forcing, RhsKind kind,
                                    const std::vector<double>& dt_sequence, double t_end);

} // namespace dnlat
