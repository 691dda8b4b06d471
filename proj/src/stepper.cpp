#include "dnlat/stepper.hpp"

#include "dnlat/diagnostics.hpp"
#include "dnlat/rhs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dnlat {

const char* to_string(StepperScheme s) {
    return s == StepperScheme::RK4Fixed ? "rk4" : "rk45";
}

void StepperConfig::validate() const {
    if (scheme == StepperScheme::RK4Fixed && !(dt > 0.0))
        throw std::invalid_argument("dt must be > 0");
    if (scheme == StepperScheme::RK45Adaptive) {
        if (!(atol > 0.0) || !(rtol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
        if (!(dt_min > 0.0) || dt_min > dt_max)
            throw std::invalid_argument("need 0 < dt_min <= dt_max");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (!(sample_every > 0.0) || sample_every > t_end)
        throw std::invalid_argument("need 0 < sample_every <= t_end");
    for (int k : tail_ks)
        if (k < 0) throw std::invalid_argument("tail K values must be >= 0");
}

namespace {

class Rk4Stepper {
public:
    explicit Rk4Stepper(const RhsEvaluator& rhs) : rhs_(rhs) {}

    void step(double /*t*/, StateVector& y, double h) {
        rhs_(y, k1_);
        tmp_ = y + (0.5 * h) * k1_;
        rhs_(tmp_, k2_);
        tmp_ = y + (0.5 * h) * k2_;
        rhs_(tmp_, k3_);
        tmp_ = y + h * k3_;
        rhs_(tmp_, k4_);
        y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    const RhsEvaluator& rhs_;
    StateVector k1_, k2_, k3_, k4_, tmp_;
};

// Dormand-Prince 5(4) with FSAL and a standard step controller.
class Dopri5Stepper {
public:
    Dopri5Stepper(const RhsEvaluator& rhs, const StepperConfig& cfg) : rhs_(rhs), cfg_(cfg) {}

    // Advances y from t to t_target; returns work estimate (accepted steps).
    long advance(double& t, StateVector& y, double t_target) {
        long accepted = 0;
        if (!have_k1_) {
            rhs_(y, k1_);
            have_k1_ = true;
        }
        while (t < t_target - 1e-14 * std::max(1.0, std::abs(t_target))) {
            double h = std::min(h_next_, cfg_.dt_max);
            const double remaining = t_target - t;
            bool clipped = false;
            if (h >= remaining) {
                h = remaining;
                clipped = true;
            }

            const double err = try_step(t, y, h);
            if (err <= 1.0) {
                t = clipped ? t_target : t + h;
                y.swap(y5_);
                k1_.swap(k7_);  // FSAL
                ++accepted;
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                fac = std::clamp(fac, 0.2, 5.0);
                h_next_ = std::clamp(h * fac, cfg_.dt_min, cfg_.dt_max);
            } else {
                double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
                const double h_new = h * fac;
                if (h_new < cfg_.dt_min)
                    throw StepUnderflowError("adaptive step size fell below dt_min at t = " +
                                                 std::to_string(t), t);
                h_next_ = h_new;
            }
        }
        return accepted;
    }

private:
    // Returns the scaled error of the trial step; fills y5_ and k7_.
    double try_step(double t, const StateVector& y, double h) {
        (void)t;  // autonomous system
        tmp_ = y + h * (a21 * k1_);
        rhs_(tmp_, k2_);
        tmp_ = y + h * (a31 * k1_ + a32 * k2_);
        rhs_(tmp_, k3_);
        tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        rhs_(tmp_, k4_);
        tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs_(tmp_, k5_);
        tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        rhs_(tmp_, k6_);
        y5_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        rhs_(y5_, k7_);
        err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

        double acc = 0.0;
        const Eigen::Index m = y.size();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double scale = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
            const double q = std::abs(err_[i]) / scale;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(m));
    }

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // difference between the 5th and embedded 4th order weights
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
    static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
    static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
    static constexpr double e7 = -1.0 / 40.0;

    const RhsEvaluator& rhs_;
    const StepperConfig& cfg_;
    StateVector k1_, k2_, k3_, k4_, k5_, k6_, k7_, y5_, tmp_, err_;
    double h_next_ = 1e-3;
    bool have_k1_ = false;
};

} // namespace

TrajectoryRecord integrate(const LatticeState& initial, const ModelParams& params,
                           const Forcing& forcing, RhsKind kind, const StepperConfig& config,
                           const SampleObserver& observer) {
    config.validate();
    params.validate(/*allow_zero_delta=*/true);
    if (forcing.n_half != initial.n_half)
        throw std::invalid_argument("forcing truncation does not match the initial state");
    if (!initial.amplitudes.allFinite())
        throw std::invalid_argument("initial state contains a non-finite entry");
    for (int k : config.tail_ks)
        if (2 * k >= initial.n_half)
            throw std::invalid_argument("tail K = " + std::to_string(k) +
                                        " not representable at n_half = " + std::to_string(initial.n_half));

    RhsEvaluator rhs(params, forcing, kind);
    StateVector y = initial.amplitudes;
    double t = 0.0;

    TrajectoryRecord rec;
    rec.tail_ks = config.tail_ks;
    rec.tails.resize(config.tail_ks.size());

    const auto record_sample = [&](double ts) {
        if (!y.allFinite())
            throw BlowUpError("state became non-finite at t = " + std::to_string(ts), ts);
        rec.times.push_back(ts);
        rec.l2.push_back(l2_norm(y));
        rec.l4.push_back(l4_norm(y));
        rec.linf.push_back(linf_norm(y));
        rec.p.push_back(p_functional(y));
        LatticeState view{y, initial.n_half};
        for (std::size_t i = 0; i < config.tail_ks.size(); ++i)
            rec.tails[i].push_back(tail_mass(view, config.tail_ks[i]));
        if (observer) observer(ts, y);
    };

    record_sample(0.0);

    Rk4Stepper rk4(rhs);
    Dopri5Stepper dopri(rhs, config);

    long sample_index = 1;
    while (t < config.t_end - 1e-12) {
        double target = static_cast<double>(sample_index) * config.sample_every;
        if (target > config.t_end - 1e-12) target = config.t_end;

        if (config.scheme == StepperScheme::RK4Fixed) {
            const double span = target - t;
            const long nsub = std::max<long>(1, static_cast<long>(std::ceil(span / config.dt - 1e-12)));
            const double h = span / static_cast<double>(nsub);
            for (long i = 0; i < nsub; ++i) {
                rk4.step(t, y, h);
                if (!y.allFinite())
                    throw BlowUpError("state became non-finite near t = " + std::to_string(t), t);
                t += h;
            }
            t = target;
        } else {
            dopri.advance(t, y, target);
            if (!y.allFinite())
                throw BlowUpError("state became non-finite near t = " + std::to_string(t), t);
        }

        record_sample(target);
        ++sample_index;
    }

    rec.final_state = LatticeState{std::move(y), initial.n_half};
    return rec;
}

LatticeState linear_fixed_point(const ModelParams& params, const Forcing& forcing) {
    if (params.mu != 0.0 || params.gamma != 0.0)
        throw std::invalid_argument("linear_fixed_point requires mu = gamma = 0");
    if (!(params.delta > 0.0)) throw std::invalid_argument("linear_fixed_point requires delta > 0");

    const Eigen::Index m = forcing.values.size();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
    const Complex ik(0.0, params.kappa);
    for (Eigen::Index n = 0; n < m; ++n) {
        M(n, n) = params.delta;
        if (n + 1 < m) M(n, n + 1) += ik;
        if (n > 0) M(n, n - 1) += ik;
    }
    if (params.boundary == BoundaryPolicy::Periodic && m > 1) {
        M(0, m - 1) += ik;
        M(m - 1, 0) += ik;
    }

    const StateVector b = Complex(0.0, -1.0) * forcing.values;
    StateVector phi = M.partialPivLu().solve(b);
    const double resid = (M * phi - b).norm();
    if (!phi.allFinite() || resid > 1e-8 * std::max(1.0, b.norm()))
        throw std::runtime_error("linear fixed-point solve failed (residual " + std::to_string(resid) + ")");
    return LatticeState{std::move(phi), forcing.n_half};
}

ConvergenceReport convergence_order(const LatticeState& initial, const ModelParams& params,
                                    const Forcing& forcing, RhsKind kind,
                                    const std::vector<double>& dt_sequence, double t_end) {
    if (dt_sequence.size() < 3)
        throw std::invalid_argument("convergence fit needs at least 3 step sizes");
    for (std::size_t i = 0; i + 1 < dt_sequence.size(); ++i) {
        if (!(dt_sequence[i] > 0.0))
            throw std::invalid_argument("step sizes must be positive");
        if (std::abs(dt_sequence[i + 1] - 0.5 * dt_sequence[i]) > 1e-9 * dt_sequence[i])
            throw std::invalid_argument("step sizes must halve at each entry");
    }

    const auto run_at = [&](double dt) {
        StepperConfig cfg;
        cfg.scheme = StepperScheme::RK4Fixed;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.sample_every = t_end;
        return integrate(initial, params, forcing, kind, cfg).final_state.amplitudes;
    };

    ConvergenceReport rep;
    rep.dts = dt_sequence;
    const StateVector reference = run_at(dt_sequence.back() / 64.0);
    for (double dt : dt_sequence) rep.errors.push_back((run_at(dt) - reference).norm());

    rep.monotone = true;
    for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
        if (!(rep.errors[i] > rep.errors[i + 1])) rep.monotone = false;
    for (double e : rep.errors)
        if (!(e > 0.0)) rep.monotone = false;

    if (!rep.monotone) {
        rep.fitted_order = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }

    // least-squares slope of ln(error) against ln(dt)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(rep.errors.size());
    for (std::size_t i = 0; i < rep.errors.size(); ++i) {
        const double x = std::log(rep.dts[i]);
        const double yv = std::log(rep.errors[i]);
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    rep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

} // namespace dnlat
