#pragma once

#include "acckit/cthp_model.hpp"

namespace acckit {

/// Log-spaced frequency grid used for the diagnostic peak-gain scan.
struct OmegaGrid {
    double omega_min{1e-3}; ///< [rad/s]
    double omega_max{1e3};  ///< [rad/s]
    int count{4096};
};

struct StabilityReport {
    double l2_margin{0.0};             ///< alpha^2 tau^2 + 2 alpha beta tau - 2 alpha
    double linf_margin{0.0};           ///< (alpha tau + beta)^2 - 4 alpha
    double beta_sq_minus_2alpha{0.0};  ///< beta^2 - 2 alpha = linf_margin - l2_margin
    double peak_gain{0.0};             ///< max |H(j omega)| over the grid (diagnostic only)
    bool l2_stable{false};             ///< margin >= 0 counts as stable
    bool linf_stable{false};
};

/// |H(j omega)| of the leader-to-follower velocity transfer function,
/// sqrt((alpha^2 + beta^2 w^2) / ((alpha - w^2)^2 + w^2 (alpha tau + beta)^2)).
double freq_response_magnitude(const CthpParams& params, double omega);

/// Strict L2 string-stability margin; >= 0 means the sufficient condition holds.
double l2_condition(const CthpParams& params);

/// Strict L-infinity (monotonic step response) margin; >= 0 means the
/// sufficient condition holds.
double linf_condition(const CthpParams& params);

StabilityReport stability_report(const CthpParams& params, const OmegaGrid& grid = {});

} // namespace acckit
