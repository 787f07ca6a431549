#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "acckit/cthp_model.hpp"

using namespace acckit;

TEST_SUITE("cthp-model") {

TEST_CASE("T = 0 step is the identity") {
    const PlatoonState s{37.5, 28.25};
    const CthpParams th{0.1, 0.2, 1.2};
    const PlatoonState next = step_dynamics(s, th, ControlInput{31.0, 0.4}, 0.0);
    CHECK(next.p == s.p);
    CHECK(next.v == s.v);
}

TEST_CASE("one Euler step, hand-computed") {
    // p' = 40 + 0.1 (25 - 30) = 39.5
    // v' = 30 + 0.1 (0.1 (40 - 1.2*30) + 0.2 (25 - 30)) = 29.94
    const PlatoonState next =
        step_dynamics(PlatoonState{40.0, 30.0}, CthpParams{0.1, 0.2, 1.2}, ControlInput{25.0}, 0.1);
    CHECK(next.p == doctest::Approx(39.5).epsilon(1e-15));
    CHECK(next.v == doctest::Approx(29.94).epsilon(1e-15));
}

TEST_CASE("disturbance enters the velocity equation only") {
    const PlatoonState base =
        step_dynamics(PlatoonState{40.0, 30.0}, CthpParams{0.1, 0.2, 1.2}, ControlInput{25.0, 0.0}, 0.1);
    const PlatoonState kicked =
        step_dynamics(PlatoonState{40.0, 30.0}, CthpParams{0.1, 0.2, 1.2}, ControlInput{25.0, 1.0}, 0.1);
    CHECK(kicked.p == base.p);
    CHECK(kicked.v - base.v == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("augmented step: parameters ride along unchanged, state matches the plain step") {
    AugmentedState xi;
    xi.p = 33.0;
    xi.v = 27.5;
    xi.alpha = 0.14;
    xi.beta = 0.21;
    xi.tau = 1.35;
    const ControlInput in{24.0, -0.2};
    const AugmentedState next = step_augmented(xi, in, 0.1);
    const PlatoonState plain = step_dynamics(xi.state(), xi.params(), in, 0.1);
    CHECK(next.p == plain.p);
    CHECK(next.v == plain.v);
    CHECK(next.alpha == xi.alpha);
    CHECK(next.beta == xi.beta);
    CHECK(next.tau == xi.tau);
}

TEST_CASE("measurement projects gap and velocity") {
    AugmentedState xi;
    xi.p = 12.5;
    xi.v = 19.75;
    xi.alpha = 0.3;
    const auto [p, v] = measure(xi);
    CHECK(p == 12.5);
    CHECK(v == 19.75);
}

TEST_CASE("vector round-trip of the augmented state") {
    Vec5 raw;
    raw << 30.0, 25.0, 0.1, 0.2, 1.2;
    const AugmentedState xi = AugmentedState::from_vector(raw);
    CHECK((xi.to_vector() - raw).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coefficient map at the reference point") {
    const LsCoeffs x = ls_coeffs_from_params(CthpParams{0.1, 0.2, 1.2}, 0.1);
    // x1 = 1 - (0.1*1.2 + 0.2)*0.1, x2 = 0.2*0.1, x3 = 0.1*0.1
    CHECK(x.x1 == doctest::Approx(0.968).epsilon(1e-15));
    CHECK(x.x2 == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(x.x3 == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("coefficient round-trip over random parameters") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ua(0.01, 0.5), ub(0.01, 0.5), ut(0.5, 3.0);
    for (int i = 0; i < 200; ++i) {
        const CthpParams th{ua(rng), ub(rng), ut(rng)};
        for (double T : {0.05, 0.1, 0.5}) {
            const CthpParams back = params_from_ls_coeffs(ls_coeffs_from_params(th, T), T);
            CHECK(std::abs(back.alpha - th.alpha) <= 1e-12 * th.alpha);
            CHECK(std::abs(back.beta - th.beta) <= 1e-12 * std::max(th.beta, 1.0));
            CHECK(std::abs(back.tau - th.tau) <= 1e-12 * th.tau);
        }
    }
}

TEST_CASE("recovery requires x3 != 0") {
    CHECK_THROWS_AS(params_from_ls_coeffs(LsCoeffs{0.97, 0.02, 0.0}, 0.1),
                    degenerate_recovery_error);
}

TEST_CASE("physicality predicate") {
    CHECK(validate_physical(CthpParams{0.1, 0.2, 1.2}));
    CHECK(validate_physical(CthpParams{0.0, 0.0, 0.1})); // zero gains are allowed
    CHECK_FALSE(validate_physical(CthpParams{-0.01, 0.2, 1.2}));
    CHECK_FALSE(validate_physical(CthpParams{0.1, -0.2, 1.2}));
    CHECK_FALSE(validate_physical(CthpParams{0.1, 0.2, 0.0}));
    CHECK_FALSE(validate_physical(CthpParams{0.1, 0.2, -1.0}));
    CHECK_FALSE(validate_physical(CthpParams{std::nan(""), 0.2, 1.2}));
}

TEST_CASE("invalid step inputs are rejected") {
    const CthpParams th{0.1, 0.2, 1.2};
    CHECK_THROWS_AS(step_dynamics(PlatoonState{40.0, 30.0}, th, ControlInput{25.0}, -0.1),
                    invalid_argument_error);
    CHECK_THROWS_AS(
        step_dynamics(PlatoonState{std::nan(""), 30.0}, th, ControlInput{25.0}, 0.1),
        invalid_argument_error);
    CHECK_THROWS_AS(step_dynamics(PlatoonState{40.0, 30.0}, th,
                                  ControlInput{std::numeric_limits<double>::infinity()}, 0.1),
                    invalid_argument_error);
}

} // TEST_SUITE
