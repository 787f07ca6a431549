#pragma once

#include <cstddef>

#include "acckit/cthp_model.hpp"
#include "acckit/trajectory_io.hpp"

namespace acckit {

/// One-step velocity regression z_k = v_{k+1}, h_k = (v_k, u_k, p_k).
struct Regression {
    Eigen::MatrixXd H; ///< rows are h_k
    Eigen::VectorXd z;
};

struct RlsState {
    Eigen::Vector3d x;
    Eigen::Matrix3d P;
    double mu{1.0}; ///< forgetting factor; 1 keeps every sample at full weight
};

enum class LsMode { batch, recursive, recursive_exp };

struct LsConfig {
    double sigma{0.001};                   ///< ridge regularizer for the batch solve
    Eigen::Vector3d x0{0.98, 0.01, 0.01};  ///< recursive prior mean
    double p0_scale{0.001};                ///< recursive prior covariance is p0_scale * I
    double mu{1.01};                       ///< forgetting factor for recursive_exp
    std::size_t warm_start_rows{0};        ///< 0 = start from (x0, P0) directly
};

struct LsRunResult {
    CthpParams params{};
    LsCoeffs coeffs{};
    double mae_gap{0.0};
    double mae_velocity{0.0};
};

Regression build_regression(const Trajectory& traj);

/// Regularized weighted least squares, x = (H'inv(R)H + sigma I)^-1 H'inv(R)z.
/// The two-argument form takes R = I; the overloads accept a per-row variance
/// vector or a full positive-definite weighting matrix. sigma = 0 demands full
/// column rank and otherwise raises rank_deficient_error.
LsCoeffs batch_solve(const Regression& reg, double sigma);
LsCoeffs batch_solve(const Regression& reg, double sigma, const Eigen::VectorXd& r_diag);
LsCoeffs batch_solve(const Regression& reg, double sigma, const Eigen::MatrixXd& r_full);

/// Rank-one covariance downdate (P^-1 + h h'/r)^-1 computed without forming
/// any inverse: P - P h (r + h'P h)^-1 h'P.
Eigen::Matrix3d rls_cov_update(const Eigen::Matrix3d& p, const Eigen::Vector3d& h, double r);

/// One recursive step: gain from rls_cov_update's kernel, mean nudged by the
/// scalar innovation, covariance inflated by 1/mu. A zero regressor leaves the
/// state untouched.
RlsState rls_step(const RlsState& state, const Eigen::Vector3d& h, double z, double r = 1.0);

/// Exact information-form batch over the first `rows` rows with prior x = 0,
/// P^-1 = sigma I: the state a recursion with those priors would reach, free
/// of the cancellation a huge flat P0 causes.
RlsState rls_warm_start(const Regression& reg, std::size_t rows, double sigma, double mu = 1.0);

/// Full identification pass: regression from the trajectory, coefficient
/// estimate per `mode`, parameter recovery, and closed-loop replay MAEs of the
/// identified model against the recorded gap/velocity.
LsRunResult run_ls(const Trajectory& traj, LsMode mode, const LsConfig& cfg = {});

} // namespace acckit
