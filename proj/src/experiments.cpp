#include "dnlat/experiments.hpp"

#include "dnlat/errors.hpp"
#include "dnlat/rhs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace dnlat {

void parallel_for(int n_jobs, int n_threads, const std::function<void(int)>& fn) {
    if (n_jobs <= 0) return;
    n_threads = std::max(1, std::min(n_threads, n_jobs));
    if (n_threads == 1) {
        for (int i = 0; i < n_jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

constexpr double kRelSlack = 1.0 + 1e-12;

} // namespace

// ---------------------------------------------------------------------------
// Closeness

ClosenessConfig::ClosenessConfig() {
    epsilons = {0.2, 0.1, 0.05, 0.025};
    initial_profile.family = ProfileFamily::Gaussian;
    initial_profile.width = 3.0;
    perturbation_profile.family = ProfileFamily::Gaussian;
    perturbation_profile.width = 2.0;
    stepper.scheme = StepperScheme::RK45Adaptive;
    stepper.atol = 1e-12;
    stepper.rtol = 1e-11;
    stepper.dt_min = 1e-10;
    stepper.dt_max = 0.5;
    stepper.sample_every = 0.05;
}

void ClosenessConfig::validate() const {
    if (epsilons.empty()) throw std::invalid_argument("closeness sweep needs at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0)) throw std::invalid_argument("epsilons must be > 0");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw std::invalid_argument("epsilons must be strictly decreasing");
    if (!(t0 > 0.0)) throw std::invalid_argument("closeness horizon t0 must be > 0");
    if (c0 < 0.0) throw std::invalid_argument("c0 must be >= 0");
    if (!(k_phi > 0.0)) throw std::invalid_argument("k_phi must be > 0");
    if (n_half < 1) throw std::invalid_argument("n_half must be >= 1");
}

ClosenessFitReport run_closeness(const ClosenessConfig& config, const ModelParams& params,
                                 const Forcing& forcing, int n_threads) {
    config.validate();
    params.validate();
    if (forcing.n_half != config.n_half)
        throw std::invalid_argument("forcing truncation does not match the closeness lattice");

    StepperConfig stepper = config.stepper;
    stepper.t_end = config.t0;
    stepper.tail_ks.clear();

    ClosenessFitReport report;
    report.t0 = config.t0;
    report.rows.resize(config.epsilons.size());
    std::vector<char> embedding_ok(config.epsilons.size(), 1);

    parallel_for(static_cast<int>(config.epsilons.size()), n_threads, [&](int job) {
        const double eps = config.epsilons[static_cast<std::size_t>(job)];
        const double eps3 = eps * eps * eps;

        LatticeState phi0 = scaled_to_l2(realize_profile(config.initial_profile, config.n_half),
                                         config.k_phi * eps);
        LatticeState y0 = config.c0 > 0.0
                              ? scaled_to_l1(realize_profile(config.perturbation_profile, config.n_half),
                                             config.c0 * eps3)
                              : zero_state(config.n_half);

        ClosenessEpsRow row;
        row.epsilon = eps;
        row.phi0_l2 = l2_norm(phi0);
        row.y0_l1 = l1_norm(y0);
        row.y0_l2 = l2_norm(y0);

        // Hypothesis gates of the closeness statement.
        if ((2.0 / params.delta) * forcing.l2() > row.phi0_l2 * kRelSlack)
            throw HypothesisError("closeness hypothesis violated at eps = " + std::to_string(eps) +
                                  ": (2/delta)||g|| > ||phi(0)||");
        if (row.y0_l1 > config.c0 * eps3 * kRelSlack || row.y0_l2 > config.c0 * eps3 * kRelSlack)
            throw HypothesisError("closeness hypothesis violated: ||y(0)|| exceeds C0 eps^3");

        LatticeState psi0 = make_state(phi0.amplitudes + y0.amplitudes, config.n_half);

        std::vector<StateVector> al_samples;
        al_samples.reserve(static_cast<std::size_t>(config.t0 / stepper.sample_every) + 2);
        integrate(psi0, params, forcing, RhsKind::DfAL, stepper,
                  [&](double, const StateVector& s) { al_samples.push_back(s); });

        std::size_t idx = 0;
        bool embed = true;
        integrate(phi0, params, forcing, RhsKind::DfDNLS, stepper,
                  [&](double, const StateVector& s) {
                      const StateVector diff = al_samples.at(idx++) - s;
                      const double d2 = l2_norm(diff);
                      const double dinf = linf_norm(diff);
                      row.sup_l2 = std::max(row.sup_l2, d2);
                      row.sup_linf = std::max(row.sup_linf, dinf);
                      if (dinf > d2 * kRelSlack) embed = false;
                  });
        embedding_ok[static_cast<std::size_t>(job)] = embed ? 1 : 0;
        report.rows[static_cast<std::size_t>(job)] = row;
    });

    report.linf_le_l2 = std::all_of(embedding_ok.begin(), embedding_ok.end(), [](char c) { return c; });

    std::vector<double> log_eps, log_l2, log_linf;
    for (const auto& row : report.rows) {
        const double eps3 = row.epsilon * row.epsilon * row.epsilon;
        if (row.sup_l2 > 0.0) report.uniform_c_l2 = std::max(report.uniform_c_l2, row.sup_l2 / eps3);
        if (row.sup_linf > 0.0) report.uniform_c_linf = std::max(report.uniform_c_linf, row.sup_linf / eps3);
        if (row.sup_l2 > 0.0 && row.sup_linf > 0.0) {
            log_eps.push_back(std::log(row.epsilon));
            log_l2.push_back(std::log(row.sup_l2));
            log_linf.push_back(std::log(row.sup_linf));
        }
    }
    if (log_eps.size() >= 2) {
        const LineFit f2 = fit_line(log_eps, log_l2);
        const LineFit finf = fit_line(log_eps, log_linf);
        report.slope_l2 = f2.slope;
        report.slope_linf = finf.slope;
        report.prefactor_l2 = std::exp(f2.intercept);
        report.prefactor_linf = std::exp(finf.intercept);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Absorbing-ball entry

AbsorbingRunConfig::AbsorbingRunConfig() {
    stepper.scheme = StepperScheme::RK4Fixed;
    stepper.dt = 0.01;
    stepper.sample_every = 0.1;
}

AbsorbingRunReport run_absorbing(const ModelParams& params, const Forcing& forcing, RhsKind kind,
                                 const AbsorbingRunConfig& config, int n_threads) {
    params.validate();
    if (config.ensemble_size < 1) throw std::invalid_argument("ensemble size must be >= 1");
    if (forcing.n_half != config.n_half)
        throw std::invalid_argument("forcing truncation does not match the ensemble lattice");
    if (!(config.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");

    AbsorbingRunReport report;
    report.estimate = absorbing_estimate(params, forcing, config.R, config.r, kind);
    report.ensemble_size = config.ensemble_size;
    report.entry_times.assign(static_cast<std::size_t>(config.ensemble_size), 0.0);
    report.min_margin_after_t0 = config.r;

    StepperConfig stepper = config.stepper;
    stepper.t_end = config.horizon;
    stepper.tail_ks.clear();

    const double t0 = report.estimate.t0;
    const double r = config.r;

    std::vector<double> margins(static_cast<std::size_t>(config.ensemble_size), config.r);
    std::vector<char> bad(static_cast<std::size_t>(config.ensemble_size), 0);

    parallel_for(config.ensemble_size, n_threads, [&](int job) {
        Rng rng(mix_seed(config.rng_seed, static_cast<std::uint64_t>(job)));
        const LatticeState psi0 = sample_in_ball(config.n_half, config.R, rng);

        double last_outside = 0.0;   // last sample time with norm > r
        bool ever_outside = false;
        double margin = config.r;
        bool violated = false;
        integrate(psi0, params, forcing, kind, stepper, [&](double t, const StateVector& s) {
            const double norm = l2_norm(s);
            if (norm > r * kRelSlack) {
                last_outside = t;
                ever_outside = true;
                if (t >= t0) violated = true;
            }
            if (t >= t0) margin = std::min(margin, r - norm);
        });

        report.entry_times[static_cast<std::size_t>(job)] =
            ever_outside ? last_outside + stepper.sample_every : 0.0;
        margins[static_cast<std::size_t>(job)] = margin;
        bad[static_cast<std::size_t>(job)] = violated ? 1 : 0;
    });

    for (int i = 0; i < config.ensemble_size; ++i) {
        report.counterexamples += bad[static_cast<std::size_t>(i)];
        report.worst_entry_time = std::max(report.worst_entry_time, report.entry_times[static_cast<std::size_t>(i)]);
        report.min_margin_after_t0 = std::min(report.min_margin_after_t0, margins[static_cast<std::size_t>(i)]);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Tails

TailsConfig::TailsConfig() {
    xi_list = {1e-6};
    initial_profile.family = ProfileFamily::CompactBlock;
    initial_profile.support_half_width = 4;
    stepper.scheme = StepperScheme::RK4Fixed;
    stepper.dt = 0.01;
    stepper.sample_every = 0.25;
}

TailsReport run_tails(const ModelParams& params, const Forcing& forcing, RhsKind kind,
                      const TailsConfig& config) {
    params.validate();
    if (config.xi_list.empty()) throw std::invalid_argument("tails run needs at least one xi");
    for (double xi : config.xi_list)
        if (!(xi > 0.0)) throw std::invalid_argument("xi thresholds must be > 0");
    if (forcing.n_half != config.n_half)
        throw std::invalid_argument("forcing truncation does not match the tails lattice");
    if (config.n_half < 3) throw std::invalid_argument("tails need n_half >= 3");

    const LatticeState psi0 = realize_profile(config.initial_profile, config.n_half);

    StepperConfig stepper = config.stepper;
    stepper.t_end = config.horizon;
    stepper.tail_ks.clear();

    TailsReport report;
    report.k_max = (config.n_half - 1) / 2;
    report.tail_curves.assign(static_cast<std::size_t>(report.k_max) + 1, {});

    // suffix sums give every tail level in one pass per sample
    std::vector<double> suffix(static_cast<std::size_t>(config.n_half) + 1, 0.0);
    integrate(psi0, params, forcing, kind, stepper, [&](double t, const StateVector& s) {
        report.sample_times.push_back(t);
        const int nh = config.n_half;
        suffix[static_cast<std::size_t>(nh)] = 0.0;
        for (int j = nh; j >= 1; --j)
            suffix[static_cast<std::size_t>(j - 1)] = suffix[static_cast<std::size_t>(j)] +
                                                      std::norm(s[nh + j]) + std::norm(s[nh - j]);
        for (int K = 0; K <= report.k_max; ++K)
            report.tail_curves[static_cast<std::size_t>(K)].push_back(suffix[static_cast<std::size_t>(2 * K)]);
    });

    const std::size_t n_samples = report.sample_times.size();
    for (std::size_t j = 0; j < n_samples; ++j)
        for (int K = 0; K + 1 <= report.k_max; ++K)
            if (report.tail_curves[static_cast<std::size_t>(K + 1)][j] >
                report.tail_curves[static_cast<std::size_t>(K)][j] * kRelSlack)
                report.monotone_in_k = false;

    for (double xi : config.xi_list) {
        TailXiEntry entry;
        entry.xi = xi;
        for (int K = 0; K <= report.k_max && !entry.found; ++K) {
            const auto& curve = report.tail_curves[static_cast<std::size_t>(K)];
            // smallest T such that the curve stays <= xi from T on
            std::size_t first_ok = n_samples;
            for (std::size_t j = n_samples; j-- > 0;) {
                if (curve[j] > xi) break;
                first_ok = j;
            }
            if (first_ok < n_samples) {
                entry.found = true;
                entry.K = K;
                entry.T = report.sample_times[first_ok];
                double worst = 0.0;
                for (std::size_t j = first_ok; j < n_samples; ++j) worst = std::max(worst, curve[j]);
                entry.max_tail_from_T = worst;
            }
        }
        if (!entry.found) report.all_found = false;
        report.entries.push_back(entry);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Congruence

CongruenceCloudConfig::CongruenceCloudConfig() {
    stepper.scheme = StepperScheme::RK4Fixed;
    stepper.dt = 0.01;
    stepper.sample_every = 1.0;  // overwritten with cadence
}

std::vector<CongruenceReport> run_congruence(const ModelParams& params, const Forcing& forcing_shape,
                                             const std::vector<double>& epsilon_list,
                                             const CongruenceCloudConfig& config, int n_threads) {
    params.validate();
    if (epsilon_list.empty()) throw std::invalid_argument("congruence sweep needs at least one epsilon");
    for (std::size_t i = 0; i + 1 < epsilon_list.size(); ++i)
        if (!(epsilon_list[i] > epsilon_list[i + 1]))
            throw std::invalid_argument("epsilons must be strictly decreasing");
    if (config.n_initial < 1 || config.samples_per_trajectory < 1)
        throw std::invalid_argument("cloud configuration must be positive");
    if (!(config.cadence > 0.0)) throw std::invalid_argument("cloud cadence must be > 0");
    if (!(config.g_fraction > 0.0) || config.g_fraction > 1.0)
        throw std::invalid_argument("g_fraction must lie in (0, 1]");
    if (forcing_shape.n_half != config.n_half)
        throw std::invalid_argument("forcing truncation does not match the congruence lattice");

    std::vector<CongruenceReport> reports(epsilon_list.size());

    for (std::size_t ei = 0; ei < epsilon_list.size(); ++ei) {
        const double eps = epsilon_list[ei];
        const double r_mu = config.k_phi * eps;
        const Forcing g = scaled_to_l2(forcing_shape,
                                       config.g_fraction * 0.5 * params.delta * config.k_phi * eps);

        CongruenceReport rep;
        rep.epsilon = eps;
        rep.r_mu = r_mu;

        // Shared initial ensemble in the admissible shell of B_{R_mu}.
        const double norm_lo = (2.0 / params.delta) * g.l2();
        const double norm_hi = 0.999 * r_mu;
        std::vector<LatticeState> initials;
        initials.reserve(static_cast<std::size_t>(config.n_initial));
        Rng rng(mix_seed(config.rng_seed, static_cast<std::uint64_t>(ei)));
        for (int i = 0; i < config.n_initial; ++i) {
            const double norm = rng.uniform(norm_lo, norm_hi);
            initials.push_back(LatticeState{norm * random_direction(config.n_half, rng), config.n_half});
        }

        // Hypothesis flags (I)-(III); the run refuses to proceed when any fails.
        rep.hyp_shared_initial = norm_lo <= norm_hi;
        rep.hyp_scaling = true;
        for (const auto& s : initials) {
            const double norm = l2_norm(s);
            if (norm >= r_mu || (2.0 / params.delta) * g.l2() > norm * kRelSlack)
                rep.hyp_scaling = false;
        }
        rep.hyp_conditions = uniform_bound_condition(params, g) &&
                             (params.mu == 0.0 || r_mu * r_mu < params.delta / (4.0 * params.mu));
        if (!rep.hyp_shared_initial || !rep.hyp_scaling || !rep.hyp_conditions)
            throw HypothesisError("congruence hypotheses (I)-(III) not satisfied at eps = " +
                                  std::to_string(eps));

        const AbsorbingEstimate est = [&] {
            // r between rho and R_mu
            AbsorbingEstimate probe = absorbing_estimate(params, g, r_mu, r_mu, RhsKind::DfAL);
            const double r = std::sqrt(0.5 * (probe.rho_sq + r_mu * r_mu));
            return absorbing_estimate(params, g, r_mu, r, RhsKind::DfAL);
        }();
        rep.absorb_r = est.r;
        rep.burn_in = config.burn_in_factor * est.t0;

        const long first_sample = static_cast<long>(std::ceil(rep.burn_in / config.cadence - 1e-12));
        const double t_begin = static_cast<double>(first_sample) * config.cadence;
        StepperConfig stepper = config.stepper;
        stepper.sample_every = config.cadence;
        stepper.t_end = t_begin + (config.samples_per_trajectory - 1) * config.cadence;
        stepper.tail_ks.clear();

        const int jobs = 2 * config.n_initial;
        std::vector<std::vector<LatticeState>> job_states(static_cast<std::size_t>(jobs));
        std::vector<std::vector<double>> job_times(static_cast<std::size_t>(jobs));
        parallel_for(jobs, n_threads, [&](int job) {
            const int ic = job / 2;
            const RhsKind kind = (job % 2 == 0) ? RhsKind::DfAL : RhsKind::DfDNLS;
            auto& states = job_states[static_cast<std::size_t>(job)];
            auto& times = job_times[static_cast<std::size_t>(job)];
            integrate(initials[static_cast<std::size_t>(ic)], params, g, kind, stepper,
                      [&](double t, const StateVector& s) {
                          if (t + 1e-9 < t_begin) return;
                          states.push_back(LatticeState{s, config.n_half});
                          times.push_back(t);
                      });
        });

        AttractorCloud cloud_mu, cloud_gamma;
        cloud_mu.system = RhsKind::DfAL;
        cloud_gamma.system = RhsKind::DfDNLS;
        cloud_mu.burn_in = cloud_gamma.burn_in = rep.burn_in;
        for (int job = 0; job < jobs; ++job) {
            auto& cloud = (job % 2 == 0) ? cloud_mu : cloud_gamma;
            auto& states = job_states[static_cast<std::size_t>(job)];
            auto& times = job_times[static_cast<std::size_t>(job)];
            for (std::size_t k = 0; k < states.size(); ++k) {
                if (l2_norm(states[k]) > est.r * (1.0 + 1e-9))
                    throw std::runtime_error("cloud sample escaped the absorbing ball at eps = " +
                                             std::to_string(eps));
                cloud.states.push_back(std::move(states[k]));
                cloud.sample_times.push_back(times[k]);
            }
        }
        if (cloud_mu.states.empty() || cloud_gamma.states.empty())
            throw std::runtime_error("congruence clouds are empty (insufficient samples)");

        rep.cloud_size_mu = cloud_mu.states.size();
        rep.cloud_size_gamma = cloud_gamma.states.size();
        rep.dist_mu_to_gamma = hausdorff_semidistance(cloud_mu, cloud_gamma);
        rep.dist_gamma_to_mu = hausdorff_semidistance(cloud_gamma, cloud_mu);
        reports[ei] = rep;
    }
    return reports;
}

bool congruence_trend_nonincreasing(const std::vector<CongruenceReport>& reports, double slack) {
    for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
        if (reports[i + 1].dist_mu_to_gamma > reports[i].dist_mu_to_gamma + slack) return false;
        if (reports[i + 1].dist_gamma_to_mu > reports[i].dist_gamma_to_mu + slack) return false;
    }
    return true;
}

} // namespace dnlat
