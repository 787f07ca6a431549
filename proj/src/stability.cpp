#include "acckit/stability.hpp"

#include <algorithm>
#include <cmath>

namespace acckit {

double freq_response_magnitude(const CthpParams& params, double omega) {
    if (!std::isfinite(omega) || omega < 0.0)
        throw invalid_argument_error("freq_response_magnitude: omega must be finite and >= 0");
    const double a = params.alpha, b = params.beta, t = params.tau;
    const double w2 = omega * omega;
    const double num = a * a + b * b * w2;
    const double den = (a - w2) * (a - w2) + w2 * (a * t + b) * (a * t + b);
    if (den == 0.0)
        throw singular_frequency_error("freq_response_magnitude: zero denominator at omega");
    return std::sqrt(num / den);
}

double l2_condition(const CthpParams& params) {
    const double a = params.alpha, b = params.beta, t = params.tau;
    return a * a * t * t + 2.0 * a * b * t - 2.0 * a;
}

double linf_condition(const CthpParams& params) {
    const double a = params.alpha, b = params.beta, t = params.tau;
    const double s = a * t + b;
    return s * s - 4.0 * a;
}

StabilityReport stability_report(const CthpParams& params, const OmegaGrid& grid) {
    if (grid.count < 1 || !(grid.omega_min > 0.0) || !(grid.omega_max >= grid.omega_min))
        throw invalid_argument_error("stability_report: need count >= 1 and 0 < omega_min <= omega_max");

    StabilityReport rep;
    rep.l2_margin = l2_condition(params);
    rep.linf_margin = linf_condition(params);
    rep.beta_sq_minus_2alpha = params.beta * params.beta - 2.0 * params.alpha;
    rep.l2_stable = rep.l2_margin >= 0.0;
    rep.linf_stable = rep.linf_margin >= 0.0;

    // Diagnostic scan only; verdicts come from the closed-form margins above.
    const double lmin = std::log(grid.omega_min);
    const double lmax = std::log(grid.omega_max);
    double peak = 0.0;
    for (int i = 0; i < grid.count; ++i) {
        const double f = grid.count == 1 ? 0.0 : static_cast<double>(i) / (grid.count - 1);
        const double omega = std::exp(lmin + f * (lmax - lmin));
        peak = std::max(peak, freq_response_magnitude(params, omega));
    }
    rep.peak_gain = peak;
    return rep;
}

} // namespace acckit
