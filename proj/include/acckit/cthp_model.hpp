#pragma once

#include <Eigen/Dense>
#include <utility>

#include "acckit/errors.hpp"

namespace acckit {

using Vec5 = Eigen::Matrix<double, 5, 1>;

/// Constant-time-headway-policy controller gains. Raw storage: estimators may
/// legitimately produce negative values, so physicality is a query, not a
/// constructor constraint.
struct CthpParams {
    double alpha{0.0}; ///< gap-error gain [1/s^2]
    double beta{0.0};  ///< relative-velocity gain [1/s]
    double tau{0.0};   ///< time headway [s]
};

/// False when alpha < 0, beta < 0 or tau <= 0.
bool validate_physical(const CthpParams& params);

struct PlatoonState {
    double p{0.0}; ///< space gap to the leader [m]
    double v{0.0}; ///< follower velocity [m/s]
};

struct ControlInput {
    double u{0.0}; ///< leader velocity [m/s]
    double d{0.0}; ///< acceleration disturbance [m/s^2]
};

/// The 5-vector [p, v, alpha, beta, tau] the joint filter estimates.
struct AugmentedState {
    double p{0.0};
    double v{0.0};
    double alpha{0.0};
    double beta{0.0};
    double tau{0.0};

    static AugmentedState from_vector(const Vec5& xi);
    Vec5 to_vector() const;
    CthpParams params() const { return {alpha, beta, tau}; }
    PlatoonState state() const { return {p, v}; }
};

/// Coefficients of the one-step linear regression v_{k+1} = x1 v_k + x2 u_k + x3 p_k,
/// with x1 = 1 - (alpha tau + beta) T, x2 = beta T, x3 = alpha T.
struct LsCoeffs {
    double x1{0.0};
    double x2{0.0};
    double x3{0.0};
};

/// One Euler-forward step of the closed-loop gap/velocity dynamics:
///   p' = p + T (u - v)
///   v' = v + T (alpha (p - tau v) + beta (u - v) + d)
/// T = 0 degenerates to the identity.
PlatoonState step_dynamics(const PlatoonState& s, const CthpParams& params,
                           const ControlInput& input, double T);

/// Same step on the augmented state; the parameter entries pass through unchanged.
AugmentedState step_augmented(const AugmentedState& xi, const ControlInput& input, double T);

/// The measurement map: (p, v) are observed directly.
std::pair<double, double> measure(const AugmentedState& xi);

/// Inverse of ls_coeffs_from_params. Requires x3 != 0 (tau is undefined otherwise).
CthpParams params_from_ls_coeffs(const LsCoeffs& x, double T);

LsCoeffs ls_coeffs_from_params(const CthpParams& params, double T);

} // namespace acckit
