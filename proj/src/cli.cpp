#include "dnlat/cli.hpp"

#include "dnlat/diagnostics.hpp"
#include "dnlat/experiments.hpp"
#include "dnlat/io.hpp"
#include "dnlat/lipschitz.hpp"
#include "dnlat/operators.hpp"
#include "dnlat/rhs.hpp"
#include "dnlat/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

namespace dnlat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunInputs {
    ConfigFile cfg;
    std::string config_text;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> n_half_override;
    int threads = 1;
    std::string out_dir = ".";
};

std::uint64_t effective_seed(const RunInputs& in, const std::string& section) {
    if (in.seed_override) return *in.seed_override;
    return in.cfg.get_uint64(section, "seed", 1);
}

int lattice_n_half(const RunInputs& in) {
    const int n = in.n_half_override ? *in.n_half_override : in.cfg.get_int("lattice", "n_half", 128);
    if (n < 0) throw ConfigError("n_half must be >= 0", in.cfg.line_of("lattice", "n_half"));
    return n;
}

ModelParams build_model(const ConfigFile& cfg, bool allow_zero_delta) {
    ModelParams p;
    p.kappa = cfg.get_double("model", "kappa", 1.0);
    p.mu = cfg.get_double("model", "mu", 0.0);
    p.gamma = cfg.get_double("model", "gamma", 0.0);
    p.delta = cfg.get_double("model", "delta", 1.0);
    const std::string bc = cfg.get_string("model", "boundary", "zero");
    if (bc == "zero")
        p.boundary = BoundaryPolicy::ZeroPadding;
    else if (bc == "periodic")
        p.boundary = BoundaryPolicy::Periodic;
    else
        throw ConfigError("boundary must be 'zero' or 'periodic', got '" + bc + "'",
                          cfg.line_of("model", "boundary"));
    try {
        p.validate(allow_zero_delta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), cfg.line_of("model", "delta"));
    }
    return p;
}

RhsKind parse_kind(const ConfigFile& cfg, const std::string& section, const std::string& fallback) {
    const std::string k = cfg.get_string(section, "kind", fallback);
    if (k == "dfal") return RhsKind::DfAL;
    if (k == "dfdnls") return RhsKind::DfDNLS;
    if (k == "combined") return RhsKind::Combined;
    throw ConfigError("kind must be dfal, dfdnls or combined, got '" + k + "'",
                      cfg.line_of(section, "kind"));
}

Forcing build_forcing(const ConfigFile& cfg, int n_half) {
    ForcingSpec spec;
    const std::string fam = cfg.get_string("forcing", "family", "zero");
    try {
        spec.family = forcing_family_from_string(fam);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), cfg.line_of("forcing", "family"));
    }
    spec.amplitude = cfg.get_double("forcing", "amplitude", 0.0);
    spec.width = cfg.get_double("forcing", "width", 1.0);
    spec.support_half_width = cfg.get_int("forcing", "support_half_width", 0);
    Forcing g = realize_forcing(spec, n_half);
    const double norm = cfg.get_double("forcing", "norm", -1.0);
    if (norm >= 0.0) g = scaled_to_l2(g, norm);
    return g;
}

ProfileSpec build_profile(const ConfigFile& cfg, const std::string& section, const std::string& prefix,
                          std::uint64_t seed) {
    ProfileSpec spec;
    const std::string fam = cfg.get_string(section, prefix + "family", "gaussian");
    try {
        spec.family = profile_family_from_string(fam);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), cfg.line_of(section, prefix + "family"));
    }
    spec.amplitude = cfg.get_double(section, prefix + "amplitude", 1.0);
    spec.width = cfg.get_double(section, prefix + "width", 3.0);
    spec.support_half_width = cfg.get_int(section, prefix + "support_half_width", 4);
    spec.phase_gradient = cfg.get_double(section, prefix + "phase_gradient", 0.0);
    spec.seed = seed;
    return spec;
}

StepperConfig build_stepper(const ConfigFile& cfg) {
    StepperConfig s;
    const std::string scheme = cfg.get_string("stepper", "scheme", "rk4");
    if (scheme == "rk4")
        s.scheme = StepperScheme::RK4Fixed;
    else if (scheme == "rk45")
        s.scheme = StepperScheme::RK45Adaptive;
    else
        throw ConfigError("scheme must be rk4 or rk45, got '" + scheme + "'",
                          cfg.line_of("stepper", "scheme"));
    s.dt = cfg.get_double("stepper", "dt", 0.01);
    s.atol = cfg.get_double("stepper", "atol", 1e-10);
    s.rtol = cfg.get_double("stepper", "rtol", 1e-10);
    s.dt_min = cfg.get_double("stepper", "dt_min", 1e-10);
    s.dt_max = cfg.get_double("stepper", "dt_max", 1.0);
    s.t_end = cfg.get_double("stepper", "t_end", 10.0);
    s.sample_every = cfg.get_double("stepper", "sample_every", 0.1);
    s.tail_ks = cfg.get_int_list("stepper", "tail_ks", {});
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Provenance make_provenance(const RunInputs& in, std::uint64_t seed) {
    Provenance prov;
    prov.config_hash = fnv1a_hex(in.config_text);
    prov.seed = seed;
    prov.version = kVersion;
    return prov;
}

void finish_run(const RunInputs& in, const std::string& subcommand,
                const std::vector<std::string>& outputs, double duration) {
    RunManifest m;
    m.version = kVersion;
    m.subcommand = subcommand;
    m.config_text = in.config_text;
    m.config_hash = fnv1a_hex(in.config_text);
    m.seed_override = in.seed_override;
    m.n_half_override = in.n_half_override;
    m.threads = in.threads;
    m.duration_seconds = duration;
    m.outputs = outputs;
    const std::string path = (fs::path(in.out_dir) / "manifest.json").string();
    write_manifest(m, path);
    std::cout << "wrote " << path << "\n";
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string out_path(const RunInputs& in, const std::string& name) {
    return (fs::path(in.out_dir) / name).string();
}

// --- subcommand bodies ------------------------------------------------------

int cmd_simulate(RunInputs& in) {
    Stopwatch watch;
    const int n_half = lattice_n_half(in);
    const ModelParams params = build_model(in.cfg, /*allow_zero_delta=*/true);
    const RhsKind kind = parse_kind(in.cfg, "simulate", "combined");
    const Forcing g = build_forcing(in.cfg, n_half);
    const std::uint64_t seed = effective_seed(in, "initial");

    ProfileSpec profile = build_profile(in.cfg, "initial", "", seed);
    LatticeState psi0 = realize_profile(profile, n_half);
    const double norm = in.cfg.get_double("initial", "norm", -1.0);
    if (norm >= 0.0) psi0 = scaled_to_l2(psi0, norm);

    const StepperConfig stepper = build_stepper(in.cfg);
    const TrajectoryRecord rec = integrate(psi0, params, g, kind, stepper);

    emit_trajectory_csv(rec, out_path(in, "trajectory.csv"));
    write_text_file(out_path(in, "summary.json"),
                    trajectory_summary_json(rec, make_provenance(in, seed)));
    std::cout << "simulate: " << rec.samples() << " samples to t = " << rec.times.back()
              << ", final l2 = " << rec.l2.back() << "\n";
    finish_run(in, "simulate", {"trajectory.csv", "summary.json"}, watch.seconds());
    return 0;
}

int cmd_closeness(RunInputs& in) {
    Stopwatch watch;
    ClosenessConfig cc;
    cc.n_half = lattice_n_half(in);
    cc.epsilons = in.cfg.get_double_list("closeness", "epsilons", cc.epsilons);
    cc.t0 = in.cfg.get_double("closeness", "t0", cc.t0);
    cc.c0 = in.cfg.get_double("closeness", "c0", cc.c0);
    cc.k_phi = in.cfg.get_double("closeness", "k_phi", cc.k_phi);
    cc.rng_seed = effective_seed(in, "closeness");
    cc.initial_profile = build_profile(in.cfg, "closeness", "initial_", cc.rng_seed);
    cc.initial_profile.width = in.cfg.get_double("closeness", "initial_width", 3.0);
    cc.perturbation_profile = build_profile(in.cfg, "closeness", "perturbation_", cc.rng_seed + 1);
    cc.perturbation_profile.width = in.cfg.get_double("closeness", "perturbation_width", 2.0);
    if (in.cfg.has("stepper", "scheme")) cc.stepper = build_stepper(in.cfg);

    const ModelParams params = build_model(in.cfg, false);
    const Forcing g = build_forcing(in.cfg, cc.n_half);

    const ClosenessFitReport report = run_closeness(cc, params, g, in.threads);
    write_text_file(out_path(in, "closeness.json"),
                    closeness_report_json(report, make_provenance(in, cc.rng_seed)));
    std::cout << "closeness: slope_l2 = " << report.slope_l2
              << ", slope_linf = " << report.slope_linf << " over " << report.rows.size()
              << " epsilons\n";
    finish_run(in, "closeness", {"closeness.json"}, watch.seconds());
    return 0;
}

int cmd_absorbing(RunInputs& in) {
    Stopwatch watch;
    AbsorbingRunConfig ac;
    ac.n_half = lattice_n_half(in);
    ac.ensemble_size = in.cfg.get_int("absorbing", "ensemble", 32);
    ac.R = in.cfg.get_double("absorbing", "radius_R", 1.0);
    ac.r = in.cfg.get_double("absorbing", "radius_r", 0.3);
    ac.horizon = in.cfg.get_double("absorbing", "horizon", 50.0);
    ac.rng_seed = effective_seed(in, "absorbing");
    if (in.cfg.has("stepper", "scheme")) ac.stepper = build_stepper(in.cfg);

    const ModelParams params = build_model(in.cfg, false);
    const RhsKind kind = parse_kind(in.cfg, "absorbing", "dfdnls");
    const Forcing g = build_forcing(in.cfg, ac.n_half);

    const AbsorbingRunReport report = run_absorbing(params, g, kind, ac, in.threads);
    write_text_file(out_path(in, "absorbing.json"),
                    absorbing_report_json(report, make_provenance(in, ac.rng_seed)));
    std::cout << "absorbing: t0 = " << report.estimate.t0 << ", worst entry = "
              << report.worst_entry_time << ", counterexamples = " << report.counterexamples << "\n";
    finish_run(in, "absorbing", {"absorbing.json"}, watch.seconds());
    return report.counterexamples == 0 ? 0 : 1;
}

int cmd_tails(RunInputs& in) {
    Stopwatch watch;
    TailsConfig tc;
    tc.n_half = lattice_n_half(in);
    tc.xi_list = in.cfg.get_double_list("tails", "xi", tc.xi_list);
    tc.horizon = in.cfg.get_double("tails", "horizon", tc.horizon);
    tc.initial_profile = build_profile(in.cfg, "initial", "", effective_seed(in, "initial"));
    if (in.cfg.has("stepper", "scheme")) tc.stepper = build_stepper(in.cfg);

    const ModelParams params = build_model(in.cfg, false);
    const RhsKind kind = parse_kind(in.cfg, "tails", "dfal");
    const Forcing g = build_forcing(in.cfg, tc.n_half);

    const TailsReport report = run_tails(params, g, kind, tc);
    write_text_file(out_path(in, "tails.json"),
                    tails_report_json(report, make_provenance(in, effective_seed(in, "initial"))));
    for (const auto& e : report.entries) {
        std::cout << "tails: xi = " << e.xi;
        if (e.found)
            std::cout << " -> K = " << e.K << ", T = " << e.T << "\n";
        else
            std::cout << " -> no (K, T) within the truncation\n";
    }
    finish_run(in, "tails", {"tails.json"}, watch.seconds());
    return (report.all_found && report.monotone_in_k) ? 0 : 1;
}

int cmd_congruence(RunInputs& in) {
    Stopwatch watch;
    CongruenceCloudConfig cc;
    cc.n_half = lattice_n_half(in);
    cc.n_initial = in.cfg.get_int("congruence", "n_initial", cc.n_initial);
    cc.samples_per_trajectory = in.cfg.get_int("congruence", "samples", cc.samples_per_trajectory);
    cc.cadence = in.cfg.get_double("congruence", "cadence", cc.cadence);
    cc.burn_in_factor = in.cfg.get_double("congruence", "burn_in_factor", cc.burn_in_factor);
    cc.k_phi = in.cfg.get_double("congruence", "k_phi", cc.k_phi);
    cc.g_fraction = in.cfg.get_double("congruence", "g_fraction", cc.g_fraction);
    cc.rng_seed = effective_seed(in, "congruence");
    if (in.cfg.has("stepper", "scheme")) cc.stepper = build_stepper(in.cfg);

    const std::vector<double> epsilons =
        in.cfg.get_double_list("congruence", "epsilons", {0.2, 0.1, 0.05});
    const ModelParams params = build_model(in.cfg, false);
    const Forcing g = build_forcing(in.cfg, cc.n_half);

    const std::vector<CongruenceReport> reports = run_congruence(params, g, epsilons, cc, in.threads);
    const bool trend = congruence_trend_nonincreasing(reports);
    write_text_file(out_path(in, "congruence.json"),
                    congruence_report_json(reports, trend, make_provenance(in, cc.rng_seed)));
    for (const auto& r : reports)
        std::cout << "congruence: eps = " << r.epsilon << ", dist(mu->gamma) = " << r.dist_mu_to_gamma
                  << ", dist(gamma->mu) = " << r.dist_gamma_to_mu << "\n";
    std::cout << "congruence: trend nonincreasing = " << (trend ? "yes" : "no") << "\n";
    finish_run(in, "congruence", {"congruence.json"}, watch.seconds());
    return trend ? 0 : 1;
}

int cmd_lipschitz(RunInputs& in) {
    Stopwatch watch;
    const ModelParams params = build_model(in.cfg, true);
    const double radius = in.cfg.get_double("lipschitz", "radius", 1.0);
    const int samples = in.cfg.get_int("lipschitz", "samples", 10000);
    const int n_half = in.cfg.get_int("lipschitz", "n_half", 32);
    const std::uint64_t seed = effective_seed(in, "lipschitz");

    const LipschitzReport report = sample_lipschitz(params, radius, samples, seed, n_half);
    write_text_file(out_path(in, "lipschitz.json"),
                    lipschitz_report_json({report}, make_provenance(in, seed)));
    std::cout << "lipschitz: sampled max ratio " << report.sampled_max_ratio << " vs bound "
              << report.theoretical_constant << "\n";
    finish_run(in, "lipschitz", {"lipschitz.json"}, watch.seconds());
    return report.sampled_max_ratio <= report.theoretical_constant * (1.0 + 1e-9) ? 0 : 1;
}

// Operator-identity and conservation suite.
int cmd_validate(RunInputs& in) {
    Stopwatch watch;
    const int n_half = in.cfg.get_int("validate", "n_half", 64);
    const int n_states = in.cfg.get_int("validate", "n_states", 100);
    const double t_end = in.cfg.get_double("validate", "t_end", 10.0);
    const std::uint64_t seed = effective_seed(in, "validate");

    json checks = json::array();
    bool all_ok = true;
    const auto check = [&](const std::string& name, bool ok, double value, double bound) {
        checks.push_back(json{{"name", name}, {"pass", ok}, {"value", value}, {"bound", bound}});
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << value << " vs " << bound << ")\n";
        all_ok = all_ok && ok;
    };

    // operator identities on random states, periodic truncation
    Rng rng(seed);
    const BoundaryPolicy bc = BoundaryPolicy::Periodic;
    double worst_adjoint = 0.0, worst_bsb = 0.0, worst_semidef = 0.0, worst_a = 0.0, worst_delta = 0.0;
    for (int i = 0; i < n_states; ++i) {
        const StateVector phi = random_direction(n_half, rng);
        const StateVector theta = random_direction(n_half, rng);
        worst_adjoint = std::max(worst_adjoint,
                                 std::abs(l2_inner(apply_forward_difference(phi, bc), theta) -
                                          l2_inner(phi, apply_backward_difference(theta, bc))));
        const StateVector a = apply_second_difference(phi, bc);
        worst_bsb = std::max(worst_bsb,
                             linf_norm(apply_backward_difference(apply_forward_difference(phi, bc), bc) + a));
        worst_semidef = std::max(worst_semidef, l2_inner(a, phi).real());
        worst_a = std::max(worst_a, l2_norm(a) - 4.0 * l2_norm(phi));
        worst_delta = std::max(worst_delta, l2_norm(apply_shift_laplacian(phi, bc)) - 2.0 * l2_norm(phi));
    }
    check("adjoint identity (B phi, theta) = (phi, B* theta)", worst_adjoint <= 1e-12, worst_adjoint, 1e-12);
    check("composition -A = B* B", worst_bsb <= 1e-12, worst_bsb, 1e-12);
    check("negative semidefiniteness (A phi, phi) <= 0", worst_semidef <= 1e-12, worst_semidef, 1e-12);
    check("norm bound |A phi| <= 4 |phi|", worst_a <= 1e-12, worst_a, 1e-12);
    check("norm bound |Delta phi| <= 2 |phi|", worst_delta <= 1e-12, worst_delta, 1e-12);

    // conservative-limit drift
    {
        ModelParams cons;
        cons.delta = 0.0;
        cons.mu = 0.0;
        cons.gamma = 1.0;
        cons.boundary = BoundaryPolicy::ZeroPadding;
        const Forcing zero = realize_forcing(ForcingSpec{}, n_half);
        StepperConfig sc;
        sc.scheme = StepperScheme::RK4Fixed;
        sc.dt = 0.005;
        sc.t_end = t_end;
        sc.sample_every = t_end;
        Rng r2(mix_seed(seed, 7));
        const LatticeState psi0 = sample_in_ball(n_half, 1.0, r2);
        const TrajectoryRecord rec = integrate(psi0, cons, zero, RhsKind::DfDNLS, sc);
        const double drift = std::abs(rec.l2.back() - rec.l2.front()) / rec.l2.front();
        check("dfDNLS conservative-limit l2 drift", drift < 1e-8, drift, 1e-8);

        cons.gamma = 0.0;
        cons.mu = 1.0;
        const TrajectoryRecord rec2 = integrate(psi0, cons, zero, RhsKind::DfAL, sc);
        const double pdrift = std::abs(rec2.p.back() - rec2.p.front()) / rec2.p.front();
        check("dfAL conservative-limit P drift", pdrift < 1e-8, pdrift, 1e-8);
    }

    // pure damping: ||phi(t)|| = exp(-delta t) ||phi(0)|| for the dfDNLS
    {
        ModelParams damped;
        damped.delta = 0.5;
        damped.gamma = 1.0;
        const Forcing zero = realize_forcing(ForcingSpec{}, n_half);
        StepperConfig sc;
        sc.scheme = StepperScheme::RK4Fixed;
        sc.dt = 0.005;
        sc.t_end = t_end;
        sc.sample_every = t_end;
        Rng r3(mix_seed(seed, 8));
        const LatticeState phi0 = sample_in_ball(n_half, 1.0, r3);
        const TrajectoryRecord rec = integrate(phi0, damped, zero, RhsKind::DfDNLS, sc);
        const double expected = std::exp(-damped.delta * t_end) * rec.l2.front();
        const double err = std::abs(rec.l2.back() - expected);
        check("dfDNLS pure-damping norm decay", err < 1e-9, err, 1e-9);
    }

    json j;
    j["provenance"] = json{{"config_hash", fnv1a_hex(in.config_text)}, {"seed", seed},
                           {"version", kVersion}};
    j["checks"] = checks;
    j["all_pass"] = all_ok;
    write_text_file(out_path(in, "validate.json"), j.dump(2) + "\n");
    finish_run(in, "validate", {"validate.json"}, watch.seconds());
    return all_ok ? 0 : 1;
}

int dispatch(const std::string& subcommand, RunInputs& in) {
    fs::create_directories(in.out_dir);
    if (subcommand == "simulate") return cmd_simulate(in);
    if (subcommand == "closeness") return cmd_closeness(in);
    if (subcommand == "absorbing") return cmd_absorbing(in);
    if (subcommand == "tails") return cmd_tails(in);
    if (subcommand == "congruence") return cmd_congruence(in);
    if (subcommand == "lipschitz") return cmd_lipschitz(in);
    if (subcommand == "validate") return cmd_validate(in);
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{std::string(kVersion) + " - damped & forced AL/DNLS lattice toolkit"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string out = ".";
        std::uint64_t seed = 0;
        bool seed_set = false;
        int n_half = 0;
        bool n_half_set = false;
        int threads = 1;
    };

    const std::vector<std::string> names = {"simulate",   "closeness", "absorbing", "tails",
                                            "congruence", "lipschitz", "validate"};
    std::map<std::string, Common> opts;
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        Common& c = opts[name];
        sub->add_option("--config", c.config, "config file path")->required();
        sub->add_option("--out", c.out, "output directory");
        sub->add_option("--seed", c.seed, "override every section seed")
            ->each([&c](const std::string&) { c.seed_set = true; });
        sub->add_option("--n-half", c.n_half, "override [lattice] n_half")
            ->each([&c](const std::string&) { c.n_half_set = true; });
        sub->add_option("--threads", c.threads, "worker threads for ensembles");
    }

    CLI::App* replay = app.add_subcommand("replay", "re-run a manifest bit-identically");
    std::string manifest_path, replay_out = ".";
    replay->add_option("--manifest", manifest_path, "manifest.json path")->required();
    replay->add_option("--out", replay_out, "output directory");

    std::vector<const char*> argv;
    argv.push_back("dnlat");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (replay->parsed()) {
            const RunManifest m = load_manifest(manifest_path);
            RunInputs in{ConfigFile::parse_text(m.config_text, "<manifest>"), m.config_text,
                         m.seed_override, m.n_half_override, m.threads, replay_out};
            return dispatch(m.subcommand, in);
        }
        for (const auto& name : names) {
            if (app.get_subcommand(name)->parsed()) {
                const Common& c = opts[name];
                const std::string text = read_text_file(c.config);
                RunInputs in{ConfigFile::parse_text(text, c.config), text,
                             c.seed_set ? std::optional<std::uint64_t>(c.seed) : std::nullopt,
                             c.n_half_set ? std::optional<int>(c.n_half) : std::nullopt,
                             c.threads, c.out};
                return dispatch(name, in);
            }
        }
        throw std::invalid_argument("no subcommand given");
    } catch (const BlowUpError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const StepUnderflowError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dnlat
