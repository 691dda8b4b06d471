#include "dnlat/rhs.hpp"
#include "dnlat/rng.hpp"
#include "dnlat/stepper.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dnlat;

namespace {

LatticeState random_ball_state(int n_half, double radius, std::uint64_t seed) {
    Rng rng(seed);
    return sample_in_ball(n_half, radius, rng);
}

StepperConfig rk4_config(double dt, double t_end, double sample_every) {
    StepperConfig c;
    c.scheme = StepperScheme::RK4Fixed;
    c.dt = dt;
    c.t_end = t_end;
    c.sample_every = sample_every;
    return c;
}

StepperConfig rk45_config(double tol, double t_end, double sample_every) {
    StepperConfig c;
    c.scheme = StepperScheme::RK45Adaptive;
    c.atol = tol;
    c.rtol = tol;
    c.dt_min = 1e-12;
    c.dt_max = 1.0;
    c.t_end = t_end;
    c.sample_every = sample_every;
    return c;
}

} // namespace

TEST_CASE("single-site closed form: modulus decays as exp(-delta t), phase chirps") {
    // one-site lattice with zero padding: the neighbor sum vanishes identically
    ModelParams p;
    p.mu = 3.0;  // inert on an isolated site
    p.gamma = 2.0;
    p.delta = 0.5;
    const Forcing zero = realize_forcing(ForcingSpec{}, 0);
    LatticeState s = zero_state(0);
    s.at(0) = Complex(0.8, 0.6);

    for (auto scheme : {StepperScheme::RK4Fixed, StepperScheme::RK45Adaptive}) {
        StepperConfig cfg = scheme == StepperScheme::RK4Fixed ? rk4_config(0.002, 8.0, 0.5)
                                                              : rk45_config(1e-12, 8.0, 0.5);
        std::vector<double> times;
        std::vector<Complex> values;
        integrate(s, p, zero, RhsKind::Combined, cfg, [&](double t, const StateVector& v) {
            times.push_back(t);
            values.push_back(v[0]);
        });
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Complex expected = oracles::single_site_solution(s.at(0), p.delta, p.gamma, times[i]);
            CHECK(std::abs(values[i] - expected) <= 1e-9);
            CHECK(std::abs(std::abs(values[i]) - std::abs(s.at(0)) * std::exp(-p.delta * times[i])) <=
                  1e-10);
        }
    }
}

TEST_CASE("conservative limit: dfDNLS conserves l2, dfAL conserves P") {
    ModelParams p;
    p.delta = 0.0;
    p.gamma = 1.0;
    p.mu = 0.0;
    const Forcing zero = realize_forcing(ForcingSpec{}, 48);
    const LatticeState psi0 = random_ball_state(48, 1.0, 21);

    const TrajectoryRecord dnls =
        integrate(psi0, p, zero, RhsKind::DfDNLS, rk4_config(0.005, 10.0, 1.0));
    CHECK(std::abs(dnls.l2.back() - dnls.l2.front()) / dnls.l2.front() < 1e-9);

    ModelParams q;
    q.delta = 0.0;
    q.mu = 1.0;  // P is the conserved functional at mu = 1
    const TrajectoryRecord al = integrate(psi0, q, zero, RhsKind::DfAL, rk4_config(0.005, 10.0, 1.0));
    CHECK(std::abs(al.p.back() - al.p.front()) / al.p.front() < 1e-9);
}

TEST_CASE("pure damping: dfDNLS norm decays exactly as exp(-delta t)") {
    ModelParams p;
    p.delta = 0.8;
    p.gamma = 1.2;
    const Forcing zero = realize_forcing(ForcingSpec{}, 32);
    const LatticeState phi0 = random_ball_state(32, 1.0, 31);

    const TrajectoryRecord rec = integrate(phi0, p, zero, RhsKind::DfDNLS, rk4_config(0.005, 6.0, 0.5));
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        const double expected = rec.l2.front() * std::exp(-p.delta * rec.times[i]);
        CHECK(rec.l2[i] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("linear fixed point: residual and exponential contraction") {
    ModelParams p;
    p.delta = 0.7;

    const Forcing zero = realize_forcing(ForcingSpec{}, 6);
    CHECK(l2_norm(linear_fixed_point(p, zero)) == 0.0);

    ForcingSpec fs;
    fs.family = ForcingFamily::SingleSite;
    fs.amplitude = 0.4;
    const Forcing g = realize_forcing(fs, 6);
    const LatticeState star = linear_fixed_point(p, g);
    CHECK(l2_norm(eval_rhs(star, p, g, RhsKind::Combined)) < 1e-12);

    const LatticeState phi0 = random_ball_state(6, 1.0, 77);
    const double gap0 = l2_norm(LatticeState{phi0.amplitudes - star.amplitudes, 6});
    std::vector<double> times, gaps;
    integrate(phi0, p, g, RhsKind::Combined, rk4_config(0.002, 5.0, 0.5),
              [&](double t, const StateVector& v) {
                  times.push_back(t);
                  gaps.push_back((v - star.amplitudes).norm());
              });
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(gaps[i] == doctest::Approx(gap0 * std::exp(-p.delta * times[i])).epsilon(1e-8));

    ModelParams bad = p;
    bad.mu = 0.1;
    CHECK_THROWS_AS(linear_fixed_point(bad, g), std::invalid_argument);
}

TEST_CASE("convergence order: fourth order on the single-site oracle") {
    ModelParams p;
    p.gamma = 1.0;
    p.delta = 0.5;
    const Forcing zero = realize_forcing(ForcingSpec{}, 0);
    LatticeState s = zero_state(0);
    s.at(0) = Complex(1.0, 0.0);

    const std::vector<double> dts = {0.2, 0.1, 0.05, 0.025};
    const ConvergenceReport rep = convergence_order(s, p, zero, RhsKind::Combined, dts, 5.0);
    REQUIRE(rep.monotone);
    CHECK(rep.fitted_order == doctest::Approx(4.0).epsilon(0.05));
    CHECK(rep.errors[0] / rep.errors[1] == doctest::Approx(16.0).epsilon(0.15));

    const ConvergenceReport trivial =
        convergence_order(zero_state(0), p, zero, RhsKind::Combined, dts, 5.0);
    CHECK_FALSE(trivial.monotone);
    for (double e : trivial.errors) CHECK(e == 0.0);
    CHECK(std::isnan(trivial.fitted_order));

    CHECK_THROWS_AS(convergence_order(s, p, zero, RhsKind::Combined, {0.2, 0.1}, 5.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(convergence_order(s, p, zero, RhsKind::Combined, {0.2, 0.15, 0.1}, 5.0),
                    std::invalid_argument);
}

TEST_CASE("integration is deterministic") {
    ModelParams p;
    p.mu = 0.4;
    p.gamma = 0.6;
    p.delta = 0.5;
    ForcingSpec fs;
    fs.family = ForcingFamily::Gaussian;
    fs.amplitude = 0.1;
    fs.width = 2.0;
    const Forcing g = realize_forcing(fs, 24);
    const LatticeState psi0 = random_ball_state(24, 0.8, 5);

    StepperConfig cfg = rk45_config(1e-10, 5.0, 0.5);
    cfg.tail_ks = {4, 8};
    const TrajectoryRecord a = integrate(psi0, p, g, RhsKind::Combined, cfg);
    const TrajectoryRecord b = integrate(psi0, p, g, RhsKind::Combined, cfg);
    CHECK(a.times == b.times);
    CHECK(a.l2 == b.l2);
    CHECK(a.p == b.p);
    CHECK(a.tails == b.tails);
    CHECK(a.final_state.amplitudes == b.final_state.amplitudes);
}

TEST_CASE("truncation insensitivity for decaying data") {
    ModelParams p;
    p.mu = 0.3;
    p.gamma = 0.4;
    p.delta = 0.6;
    ForcingSpec fs;
    fs.family = ForcingFamily::Gaussian;
    fs.amplitude = 0.1;
    fs.width = 2.0;

    const auto run = [&](int n_half) {
        const Forcing g = realize_forcing(fs, n_half);
        LatticeState psi0 = zero_state(n_half);
        for (int n = -n_half; n <= n_half; ++n)
            psi0.at(n) = std::exp(-n * n / 18.0);
        return integrate(psi0, p, g, RhsKind::Combined, rk4_config(0.01, 5.0, 1.0));
    };

    const TrajectoryRecord small = run(48);
    const TrajectoryRecord big = run(96);
    REQUIRE(small.samples() == big.samples());
    for (std::size_t i = 0; i < small.samples(); ++i) {
        CHECK(std::abs(small.l2[i] - big.l2[i]) <= 1e-10 * big.l2[i]);
        CHECK(std::abs(small.l4[i] - big.l4[i]) <= 1e-10 * big.l4[i]);
        CHECK(std::abs(small.linf[i] - big.linf[i]) <= 1e-10 * big.linf[i]);
        CHECK(std::abs(small.p[i] - big.p[i]) <= 1e-10 * big.p[i]);
    }
}

TEST_CASE("adaptive scheme agrees with a tiny-step fixed run") {
    ModelParams p;
    p.mu = 0.5;
    p.gamma = 0.5;
    p.delta = 0.4;
    ForcingSpec fs;
    fs.family = ForcingFamily::Gaussian;
    fs.amplitude = 0.15;
    fs.width = 2.5;
    const Forcing g = realize_forcing(fs, 24);
    const LatticeState psi0 = random_ball_state(24, 0.8, 17);

    const TrajectoryRecord fine = integrate(psi0, p, g, RhsKind::Combined, rk4_config(5e-4, 4.0, 4.0));
    const TrajectoryRecord adap = integrate(psi0, p, g, RhsKind::Combined, rk45_config(1e-11, 4.0, 4.0));
    CHECK((fine.final_state.amplitudes - adap.final_state.amplitudes).norm() < 1e-8);
}

TEST_CASE("step underflow raises a structured error") {
    ModelParams p;
    p.gamma = 1.0;
    p.delta = 0.1;
    const Forcing zero = realize_forcing(ForcingSpec{}, 8);
    LatticeState s = zero_state(8);
    s.at(0) = 2.0;

    StepperConfig cfg;
    cfg.scheme = StepperScheme::RK45Adaptive;
    cfg.atol = 1e-14;
    cfg.rtol = 1e-14;
    cfg.dt_min = 0.2;  // too coarse to ever meet the tolerance
    cfg.dt_max = 1.0;
    cfg.t_end = 5.0;
    cfg.sample_every = 1.0;
    CHECK_THROWS_AS(integrate(s, p, zero, RhsKind::DfDNLS, cfg), StepUnderflowError);
}

TEST_CASE("overflowing state raises a blow-up signal") {
    ModelParams p;
    p.gamma = 1.0;
    p.delta = 0.1;
    const Forcing zero = realize_forcing(ForcingSpec{}, 4);
    LatticeState s = zero_state(4);
    s.at(0) = 1e200;

    CHECK_THROWS_AS(integrate(s, p, zero, RhsKind::DfDNLS, rk4_config(10.0, 20.0, 10.0)), BlowUpError);
}

TEST_CASE("stepper config validation") {
    StepperConfig c;
    c.dt = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StepperConfig{};
    c.sample_every = 20.0;
    c.t_end = 10.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StepperConfig{};
    c.scheme = StepperScheme::RK45Adaptive;
    c.dt_min = 1.0;
    c.dt_max = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    // tail K not representable on the truncation
    ModelParams p;
    const Forcing zero = realize_forcing(ForcingSpec{}, 4);
    StepperConfig cfg = rk4_config(0.1, 1.0, 1.0);
    cfg.tail_ks = {2};
    CHECK_THROWS_AS(integrate(zero_state(4), p, zero, RhsKind::Combined, cfg), std::invalid_argument);
}
