#pragma once

#include "dnlat/diagnostics.hpp"
#include "dnlat/profiles.hpp"
#include "dnlat/stepper.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace dnlat {

// Runs fn(0..n_jobs-1) on up to n_threads workers. Results must be written
// to preallocated slots indexed by job id so the merge is deterministic.
void parallel_for(int n_jobs, int n_threads, const std::function<void(int)>& fn);

// ---------------------------------------------------------------------------
// Closeness sweep: integrates the dfAL from psi(0) and the dfDNLS from
// phi(0) with ||psi(0) - phi(0)|| = O(eps^3), ||phi(0)|| = K_phi eps, and
// fits the log-log slope of the peak solution distance against eps.

struct ClosenessConfig {
    std::vector<double> epsilons;      // decreasing, all > 0
    double t0 = 10.0;                  // horizon
    double c0 = 1.0;                   // ||y(0)||_{l1} = c0 eps^3 (bounds l2 as well)
    double k_phi = 1.0;                // ||phi(0)|| = k_phi eps
    ProfileSpec initial_profile;       // shape of phi(0)
    ProfileSpec perturbation_profile;  // shape of y(0)
    std::uint64_t rng_seed = 1;
    int n_half = 128;
    StepperConfig stepper;             // t_end is overwritten with t0

    ClosenessConfig();
    void validate() const;
};

struct ClosenessEpsRow {
    double epsilon = 0.0;
    double sup_l2 = 0.0;    // sup over samples of ||psi(t) - phi(t)||_{l2}
    double sup_linf = 0.0;
    double phi0_l2 = 0.0;
    double y0_l1 = 0.0;
    double y0_l2 = 0.0;
};

struct ClosenessFitReport {
    std::vector<ClosenessEpsRow> rows;
    double slope_l2 = 0.0;
    double slope_linf = 0.0;
    double prefactor_l2 = 0.0;    // exp(intercept) of the l2 fit
    double prefactor_linf = 0.0;
    double uniform_c_l2 = 0.0;    // max over the sweep of sup||y|| / eps^3
    double uniform_c_linf = 0.0;
    double t0 = 0.0;
    bool linf_le_l2 = true;       // embedding held at every sample
};

ClosenessFitReport run_closeness(const ClosenessConfig& config, const ModelParams& params,
                                 const Forcing& forcing, int n_threads = 1);

// ---------------------------------------------------------------------------
// Absorbing-ball verification: an ensemble drawn inside B_R must be inside
// B_r at every recorded t >= t0 (closed-form entry time).

struct AbsorbingRunConfig {
    int ensemble_size = 32;
    double R = 1.0;
    double r = 0.3;
    double horizon = 50.0;
    std::uint64_t rng_seed = 1;
    int n_half = 128;
    StepperConfig stepper;  // t_end is overwritten with horizon

    AbsorbingRunConfig();
};

struct AbsorbingRunReport {
    AbsorbingEstimate estimate;
    int ensemble_size = 0;
    int counterexamples = 0;        // members outside B_r at some sample t >= t0
    double worst_entry_time = 0.0;  // max over members of the observed entry time
    double min_margin_after_t0 = 0.0;  // min over members, samples t >= t0 of (r - ||.||)
    std::vector<double> entry_times;
};

AbsorbingRunReport run_absorbing(const ModelParams& params, const Forcing& forcing, RhsKind kind,
                                 const AbsorbingRunConfig& config, int n_threads = 1);

// ---------------------------------------------------------------------------
// Asymptotic tails: for each threshold xi find the smallest (K, T) with
// tail_mass(psi(t), K) <= xi at every recorded t >= T.

struct TailsConfig {
    std::vector<double> xi_list;
    double horizon = 20.0;
    ProfileSpec initial_profile;
    int n_half = 128;
    StepperConfig stepper;  // t_end is overwritten with horizon

    TailsConfig();
};

struct TailXiEntry {
    double xi = 0.0;
    bool found = false;
    int K = -1;
    double T = 0.0;
    double max_tail_from_T = 0.0;
};

struct TailsReport {
    std::vector<TailXiEntry> entries;
    std::vector<double> sample_times;
    std::vector<std::vector<double>> tail_curves;  // tail_curves[K][sample], K = 0..k_max
    int k_max = 0;
    bool monotone_in_k = true;  // tail nonincreasing in K at every sample
    bool all_found = true;
};

TailsReport run_tails(const ModelParams& params, const Forcing& forcing, RhsKind kind,
                      const TailsConfig& config);

// ---------------------------------------------------------------------------
// Attractor congruence: from a shared initial ensemble, builds post-burn-in
// sample clouds of the dfAL and dfDNLS flows and reports both Hausdorff
// semi-distances per eps.

struct CongruenceCloudConfig {
    int n_initial = 16;
    int samples_per_trajectory = 64;
    double cadence = 1.0;
    double burn_in_factor = 3.0;  // burn_in = factor * t0 of the absorbing estimate
    double k_phi = 2.5;
    double g_fraction = 0.8;      // ||g|| = fraction * (delta/2) * k_phi * eps
    std::uint64_t rng_seed = 1;
    int n_half = 256;
    StepperConfig stepper;

    CongruenceCloudConfig();
};

struct CongruenceReport {
    double epsilon = 0.0;
    double dist_mu_to_gamma = 0.0;
    double dist_gamma_to_mu = 0.0;
    std::size_t cloud_size_mu = 0;
    std::size_t cloud_size_gamma = 0;
    double burn_in = 0.0;
    double r_mu = 0.0;       // per-eps ball radius R_mu = k_phi * eps
    double absorb_r = 0.0;   // cloud containment radius
    bool hyp_shared_initial = false;  // (I)  psi0 = phi0 in B inside B_{R_mu}
    bool hyp_scaling = false;         // (II) (2/delta)||g|| <= ||phi0|| <= K_phi eps <= R_mu
    bool hyp_conditions = false;      // (III) delta^2 < 3 sum |g|^{4/3} and R_mu^2 < delta/(4 mu)
};

std::vector<CongruenceReport> run_congruence(const ModelParams& params, const Forcing& forcing_shape,
                                             const std::vector<double>& epsilon_list,
                                             const CongruenceCloudConfig& config, int n_threads = 1);

// True when both semi-distances are nonincreasing along the report list
// (which is ordered by decreasing eps).
bool congruence_trend_nonincreasing(const std::vector<CongruenceReport>& reports,
                                    double slack = 1e-12);

} // namespace dnlat
