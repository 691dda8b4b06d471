#include "dnlat/forcing.hpp"
#include "dnlat/rng.hpp"
#include "dnlat/state.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace dnlat;

TEST_CASE("make_state maps indices and validates input") {
    const LatticeState s = make_state(std::vector<Complex>{Complex(0), Complex(1), Complex(0)}, 1);
    CHECK(s.size() == 3);
    CHECK(s.at(0) == Complex(1));
    CHECK(s.at(1) == Complex(0));
    CHECK(s.at(-1) == Complex(0));

    const LatticeState z = make_state(std::vector<Complex>(3, Complex(0)), 1);
    CHECK(l2_norm(z) == 0.0);

    CHECK_THROWS_AS(make_state(StateVector::Zero(4), 1), std::invalid_argument);
    StateVector bad = StateVector::Zero(3);
    bad[1] = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(make_state(bad, 1), std::invalid_argument);
}

TEST_CASE("norms: trivial values") {
    const LatticeState z = zero_state(4);
    CHECK(l2_norm(z) == 0.0);
    CHECK(l1_norm(z) == 0.0);
    CHECK(l4_norm(z) == 0.0);
    CHECK(linf_norm(z) == 0.0);

    LatticeState s = zero_state(4);
    s.at(2) = Complex(0.0, 2.0);  // modulus 2 on one site
    CHECK(l2_norm(s) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l4_norm(s) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(linf_norm(s) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l1_norm(s) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("norms: embedding chain and oracle agreement on random states") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        StateVector v(33);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();

        const double n_inf = linf_norm(v), n4 = l4_norm(v), n2 = l2_norm(v), n1 = l1_norm(v);
        CHECK(n_inf <= n4 * (1 + 1e-14));
        CHECK(n4 <= n2 * (1 + 1e-14));
        CHECK(n2 <= n1 * (1 + 1e-14));

        CHECK(n2 == doctest::Approx(oracles::direct_l2(v)).epsilon(1e-12));
        CHECK(n1 == doctest::Approx(oracles::direct_l1(v)).epsilon(1e-12));
        CHECK(n4 == doctest::Approx(oracles::direct_l4(v)).epsilon(1e-12));
        CHECK(n_inf == doctest::Approx(oracles::direct_linf(v)).epsilon(1e-12));
    }
}

TEST_CASE("realize_forcing: trivial families") {
    const Forcing zero = realize_forcing(ForcingSpec{}, 8);
    CHECK(zero.l2_sq == 0.0);
    CHECK(zero.sum_pow_4_3 == 0.0);
    CHECK(zero.values.isZero(0.0));

    ForcingSpec single;
    single.family = ForcingFamily::SingleSite;
    single.amplitude = 0.7;
    const Forcing gs = realize_forcing(single, 8);
    CHECK(gs.values[8] == Complex(0.7));
    CHECK(gs.l2_sq == doctest::Approx(0.49).epsilon(1e-15));
    CHECK(gs.sum_pow_4_3 == doctest::Approx(std::pow(0.7, 4.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("realize_forcing: gaussian caches match an independent summation") {
    ForcingSpec spec;
    spec.family = ForcingFamily::Gaussian;
    spec.amplitude = 0.1;
    spec.width = 5.0;
    const Forcing g = realize_forcing(spec, 200);

    CHECK(g.l2_sq == doctest::Approx(oracles::direct_sum_sq(g.values)).epsilon(1e-12));
    CHECK(g.sum_pow_4_3 == doctest::Approx(oracles::direct_sum_pow_4_3(g.values)).epsilon(1e-12));

    // |g_n| nonincreasing in |n|
    for (int n = 0; n < 200; ++n) {
        CHECK(std::abs(g.values[200 + n + 1]) <= std::abs(g.values[200 + n]));
        CHECK(std::abs(g.values[200 - n - 1]) <= std::abs(g.values[200 - n]));
    }
}

TEST_CASE("realize_forcing is deterministic and monotone in n_half") {
    ForcingSpec spec;
    spec.family = ForcingFamily::ExponentialDecay;
    spec.amplitude = 0.3;
    spec.width = 4.0;

    const Forcing a = realize_forcing(spec, 64);
    const Forcing b = realize_forcing(spec, 64);
    CHECK(a.values == b.values);  // bitwise
    CHECK(a.l2_sq == b.l2_sq);
    CHECK(a.sum_pow_4_3 == b.sum_pow_4_3);

    double prev_l2 = 0.0, prev_43 = 0.0;
    for (int n_half : {8, 16, 32, 64, 128}) {
        const Forcing g = realize_forcing(spec, n_half);
        CHECK(g.l2_sq >= prev_l2);
        CHECK(g.sum_pow_4_3 >= prev_43);
        prev_l2 = g.l2_sq;
        prev_43 = g.sum_pow_4_3;
    }
}

TEST_CASE("realize_forcing rejects invalid family parameters") {
    ForcingSpec spec;
    spec.family = ForcingFamily::Gaussian;
    spec.width = 0.0;
    CHECK_THROWS_AS(realize_forcing(spec, 8), std::invalid_argument);
    spec.family = ForcingFamily::CompactSupport;
    spec.support_half_width = -1;
    CHECK_THROWS_AS(realize_forcing(spec, 8), std::invalid_argument);
}

TEST_CASE("scaled_to_l2 hits the target norm and rescales caches") {
    ForcingSpec spec;
    spec.family = ForcingFamily::CompactSupport;
    spec.amplitude = 1.0;
    spec.support_half_width = 10;
    const Forcing g = scaled_to_l2(realize_forcing(spec, 32), 0.25);
    CHECK(std::sqrt(g.l2_sq) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(g.sum_pow_4_3 == doctest::Approx(oracles::direct_sum_pow_4_3(g.values)).epsilon(1e-12));

    const Forcing zero = realize_forcing(ForcingSpec{}, 8);
    CHECK_THROWS_AS(scaled_to_l2(zero, 1.0), std::invalid_argument);
}
