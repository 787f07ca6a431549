#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "acckit/observability.hpp"

using namespace acckit;

namespace {

AugmentedState make_state(double p, double v, double a, double b, double t) {
    AugmentedState xi;
    xi.p = p;
    xi.v = v;
    xi.alpha = a;
    xi.beta = b;
    xi.tau = t;
    return xi;
}

// Largest principal angle between the column spans, via the projection residual.
double max_principal_angle_sin(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                               Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                               Eigen::MatrixXd::Identity(b.rows(), b.cols());
    const Eigen::MatrixXd resid = qb - qa * (qa.transpose() * qb);
    return resid.jacobiSvd().singularValues()(0);
}

} // namespace

TEST_SUITE("observability") {

TEST_CASE("matrix entries follow the two-step construction") {
    const AugmentedState xi = make_state(35.0, 25.0, 0.1, 0.2, 1.2);
    const double u = 27.0, T = 0.1, T2 = T * T;
    const Mat5 O = observability_matrix(xi, u, T);

    const double gap_err = xi.p - xi.tau * xi.v; // 5
    const double dv = u - xi.v;                  // 2

    CHECK(O(0, 0) == 1.0);
    CHECK(O(0, 1) == 0.0);
    CHECK(O(1, 0) == 1.0);
    CHECK(O(1, 1) == -T);
    CHECK(O(2, 0) == doctest::Approx(1.0 - xi.alpha * T2).epsilon(1e-15));
    CHECK(O(2, 1) ==
          doctest::Approx(-2.0 * T + (xi.tau * xi.alpha + xi.beta) * T2).epsilon(1e-15));
    CHECK(O(2, 2) == doctest::Approx(-gap_err * T2).epsilon(1e-15));
    CHECK(O(2, 3) == doctest::Approx(-dv * T2).epsilon(1e-15));
    CHECK(O(2, 4) == doctest::Approx(xi.alpha * xi.v * T2).epsilon(1e-15));
    CHECK(O(3, 1) == 1.0);
    CHECK(O(4, 0) == doctest::Approx(xi.alpha * T).epsilon(1e-15));
    CHECK(O(4, 1) == doctest::Approx(-xi.alpha * xi.tau * T).epsilon(1e-15));
    CHECK(O(4, 2) == doctest::Approx(gap_err * T).epsilon(1e-15));
    CHECK(O(4, 3) == doctest::Approx(dv * T).epsilon(1e-15));
    CHECK(O(4, 4) == doctest::Approx(-xi.alpha * xi.v * T).epsilon(1e-15));
}

TEST_CASE("equilibrium: rank 3, kernel is the alpha/beta plane") {
    const AugmentedState xi = make_state(24.0, 20.0, 0.1, 0.2, 1.2); // p = tau v, u = v
    const OrcReport rep = classify_observability(xi, 20.0, 0.1);
    CHECK(rep.rank == 3);
    CHECK(rep.nullity == 2);
    CHECK(rep.regime == Regime::equilibrium);
    CHECK_FALSE(rep.observable);

    const std::vector<Vec5> kernel = closed_form_kernel(xi, 20.0, 0.1);
    REQUIRE(kernel.size() == 2);
    CHECK((kernel[0] - Vec5::Unit(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((kernel[1] - Vec5::Unit(3)).cwiseAbs().maxCoeff() == 0.0);

    // The SVD basis spans the same plane.
    Eigen::MatrixXd svd_basis(5, 2), closed(5, 2);
    svd_basis.col(0) = rep.null_basis[0];
    svd_basis.col(1) = rep.null_basis[1];
    closed.col(0) = kernel[0];
    closed.col(1) = kernel[1];
    CHECK(max_principal_angle_sin(svd_basis, closed) <= 1e-10);
}

TEST_CASE("non-equilibrium: rank 3 and the closed-form kernel annihilates the matrix") {
    const AugmentedState xi = make_state(35.0, 25.0, 0.1, 0.2, 1.2); // p - tau v = 5
    const double u = 27.0, T = 0.1;
    const OrcReport rep = classify_observability(xi, u, T);
    CHECK(rep.rank == 3);
    CHECK(rep.nullity == 2);
    CHECK(rep.regime == Regime::non_equilibrium);

    const std::vector<Vec5> kernel = closed_form_kernel(xi, u, T);
    REQUIRE(kernel.size() == 2);
    const Mat5 O = observability_matrix(xi, u, T);
    for (const Vec5& k : kernel) {
        CHECK((O * k).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(k.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Structure: k1 mixes alpha with beta, k2 mixes alpha with tau.
    const double gap_err = xi.p - xi.tau * xi.v;
    const double dv = u - xi.v;
    Vec5 k1 = Vec5::Zero(), k2 = Vec5::Zero();
    k1(2) = -dv / gap_err;
    k1(3) = 1.0;
    k2(2) = xi.alpha * xi.v / gap_err;
    k2(4) = 1.0;
    CHECK((kernel[0] - k1.normalized()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((kernel[1] - k2.normalized()).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd svd_basis(5, 2), closed(5, 2);
    svd_basis.col(0) = rep.null_basis[0];
    svd_basis.col(1) = rep.null_basis[1];
    closed.col(0) = kernel[0];
    closed.col(1) = kernel[1];
    CHECK(max_principal_angle_sin(svd_basis, closed) <= 1e-10);
}

TEST_CASE("near-equilibrium gap: closed form steps aside, SVD still answers") {
    // p - tau v below tolerance but u != v.
    const AugmentedState xi = make_state(24.0 + 1e-9, 20.0, 0.1, 0.2, 1.2);
    const OrcReport rep = classify_observability(xi, 23.0, 0.1);
    CHECK(rep.regime == Regime::near_equilibrium);
    CHECK(rep.rank == 3);
    CHECK(rep.null_basis.size() == 2);
    CHECK(closed_form_kernel(xi, 23.0, 0.1).empty());
}

TEST_CASE("matched velocities but an open gap stay fully classified") {
    // u = v yet p != tau v: still the generic two-vector kernel, with the
    // beta direction exactly unobservable.
    const AugmentedState xi = make_state(40.0, 25.0, 0.1, 0.2, 1.2);
    const OrcReport rep = classify_observability(xi, 25.0, 0.1);
    CHECK(rep.regime == Regime::non_equilibrium);
    CHECK(rep.rank == 3);
    const std::vector<Vec5> kernel = closed_form_kernel(xi, 25.0, 0.1);
    REQUIRE(kernel.size() == 2);
    CHECK((kernel[0] - Vec5::Unit(3)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("rank never reaches the full state dimension") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> up(5.0, 100.0), uv(5.0, 35.0), ug(0.01, 0.5),
        ut(0.5, 3.0), uu(5.0, 35.0);
    int checked = 0;
    while (checked < 200) {
        const AugmentedState xi = make_state(up(rng), uv(rng), ug(rng), ug(rng), ut(rng));
        if (std::abs(xi.p - xi.tau * xi.v) < 1e-3) continue;
        const OrcReport rep = classify_observability(xi, uu(rng), 0.1);
        CHECK(rep.rank == 3);
        CHECK(rep.nullity == 2);
        CHECK_FALSE(rep.observable);
        ++checked;
    }
}

TEST_CASE("numeric rank and null space on known matrices") {
    Eigen::MatrixXd d = Eigen::VectorXd{{1.0, 2.0, 3.0, 0.0, 0.0}}.asDiagonal();
    CHECK(numeric_rank(d) == 3);
    CHECK(numeric_rank(Eigen::MatrixXd::Zero(4, 4)) == 0);
    CHECK(numeric_rank(Eigen::MatrixXd::Identity(5, 5)) == 5);

    const Eigen::MatrixXd ns = null_space(d);
    CHECK(ns.cols() == 2);
    CHECK((d * ns).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((ns.transpose() * ns - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("invalid inputs are rejected") {
    const AugmentedState xi = make_state(35.0, 25.0, 0.1, 0.2, 1.2);
    CHECK_THROWS_AS(observability_matrix(xi, 27.0, 0.0), invalid_argument_error);
    CHECK_THROWS_AS(observability_matrix(xi, std::nan(""), 0.1), invalid_argument_error);
}

} // TEST_SUITE
