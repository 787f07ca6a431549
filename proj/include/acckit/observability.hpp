#pragma once

#include <vector>

#include "acckit/cthp_model.hpp"

namespace acckit {

using Mat5 = Eigen::Matrix<double, 5, 5>;

enum class Regime {
    equilibrium,      ///< |u - v| and |p - tau v| both below tolerance
    non_equilibrium,  ///< |p - tau v| large enough for the closed-form kernel
    near_equilibrium, ///< not at equilibrium but p - tau v ~ 0: SVD kernel only
};

struct OrcReport {
    Mat5 matrix;
    int rank{0};
    int nullity{0};
    std::vector<Vec5> null_basis; ///< orthonormal kernel basis from the SVD
    Regime regime{Regime::non_equilibrium};
    bool observable{false}; ///< rank == 5
};

/// Second-order observability matrix of the augmented CTHP system at the given
/// operating point (Euler-forward discretization, measurement of p and v).
Mat5 observability_matrix(const AugmentedState& xi, double u, double T);

/// Count of singular values > tol * sigma_max. tol < 0 selects the default
/// max(rows, cols) * machine-epsilon.
int numeric_rank(const Eigen::MatrixXd& M, double tol = -1.0);

/// Orthonormal basis of the right null space (columns), by singular-value
/// thresholding with the same tolerance convention as numeric_rank.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double tol = -1.0);

/// The closed-form kernel of the observability matrix: span{e_alpha, e_beta}
/// at equilibrium, and the two (alpha, beta)/(alpha, tau) mixing directions
/// away from it. Empty in the near-equilibrium regime where the closed form
/// would divide by p - tau v ~ 0.
std::vector<Vec5> closed_form_kernel(const AugmentedState& xi, double u, double T,
                                     double eq_tol = 1e-6);

OrcReport classify_observability(const AugmentedState& xi, double u, double T,
                                 double eq_tol = 1e-6);

} // namespace acckit
