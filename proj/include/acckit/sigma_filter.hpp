#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acckit/cthp_model.hpp"
#include "acckit/trajectory_io.hpp"

namespace acckit {

/// Scaled unscented-transform configuration. lambda = a^2 (n + b) - n and the
/// sigma-point radius is delta = sqrt(n + lambda).
struct UtConfig {
    double a{1.0};           ///< spread scalar in [1e-4, 1]
    std::optional<double> b; ///< secondary scaling; defaults to 3 - n
    double eps{0.0};         ///< prior-knowledge constant (2 is optimal for Gaussians)

    double effective_b(int n) const { return b ? *b : 3.0 - static_cast<double>(n); }
    double lambda(int n) const;
    double delta(int n) const;
};

struct SigmaSet {
    Eigen::MatrixXd points; ///< n x (2n+1); column 0 is the mean
    Eigen::VectorXd w_m;    ///< mean weights, sum to 1
    Eigen::VectorXd w_c;    ///< covariance weights, w_c[i] = w_m[i] for i >= 1
};

struct GaussianBelief {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov; ///< kept symmetric; conditioned to PSD after each assembly
};

struct NoiseConfig {
    Eigen::MatrixXd Q; ///< process noise, n x n; parameter pseudo-noise in the tail block
    Eigen::MatrixXd R; ///< measurement noise, l x l, positive definite

    /// The joint-filter tuning used throughout the recovery experiments:
    /// Q = diag(2e-5, 5e-6, 1e-6, 1e-6, 1e-6), R = diag(0.8, 0.2).
    static NoiseConfig dukf_defaults();
};

struct EstimateTrace {
    std::vector<double> t;
    std::vector<Vec5> mean;                    ///< filtered mean per step
    std::vector<Vec5> cov_diag;                ///< diag of the filtered covariance
    std::vector<Eigen::Vector2d> innovation;   ///< y - predicted measurement
    CthpParams final_params{};
    double mae_gap{0.0};      ///< mean |p_hat - p_meas| [m]
    double mae_velocity{0.0}; ///< mean |v_hat - v_meas| [m/s]
};

/// Mean/covariance weight vectors for a 2n+1 sigma set.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ut_weights(int n, const UtConfig& cfg);

/// Symmetric 2n+1 sigma set: column 0 the mean, then mean +- delta * (columns
/// of the lower Cholesky factor of spread_source). Semidefinite inputs are
/// handled; indefinite ones go through the jitter ladder and then fail with
/// numerical_breakdown_error.
SigmaSet generate_sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& spread_source,
                               const UtConfig& cfg);

/// Symmetrize, then repair tiny indefiniteness by the documented jitter ladder
/// (10 |lambda_min| I, escalating x10, at most 3 attempts).
Eigen::MatrixXd condition_covariance(Eigen::MatrixXd M);

/// UKF time update over one sampling period: propagate the belief's sigma
/// points through the augmented CTHP step driven by `input`, recombine, add Q.
/// Returns the predicted belief and the propagated sigma set.
std::pair<GaussianBelief, SigmaSet> predict(const GaussianBelief& belief, const ControlInput& input,
                                            const NoiseConfig& noise, const UtConfig& cfg,
                                            double T);

/// UKF measurement update with y = (p, v). With redraw = true (default) the
/// update sigma set is regenerated from the predicted covariance; otherwise it
/// is spread by the process noise Q around the predicted mean.
GaussianBelief update(const GaussianBelief& predicted, double p_meas, double v_meas,
                      const NoiseConfig& noise, const UtConfig& cfg, bool redraw = true);

/// Joint state/parameter filter over a whole trajectory: alternating
/// predict/update, one pair per sample after the first. The trace has one
/// entry per sample (entry 0 is the initial belief) and the MAEs compare the
/// filtered gap/velocity against the measured series, all samples included.
EstimateTrace run_dukf(const Trajectory& traj, const GaussianBelief& init,
                       const NoiseConfig& noise, const UtConfig& cfg, bool redraw = true);

/// Trace CSV: t, p_meas, v_meas, p_hat, v_hat, alpha_hat, beta_hat, tau_hat,
/// p_var, v_var, alpha_var, beta_var, tau_var.
void write_trace_csv(const EstimateTrace& trace, const Trajectory& traj, const std::string& path);

} // namespace acckit
