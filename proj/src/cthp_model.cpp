#include "acckit/cthp_model.hpp"

#include <cmath>

namespace acckit {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require_finite_step_inputs(const PlatoonState& s, const CthpParams& params,
                                const ControlInput& input, double T) {
    if (!finite(s.p) || !finite(s.v))
        throw invalid_argument_error("step_dynamics: non-finite state");
    if (!finite(params.alpha) || !finite(params.beta) || !finite(params.tau))
        throw invalid_argument_error("step_dynamics: non-finite parameters");
    if (!finite(input.u) || !finite(input.d))
        throw invalid_argument_error("step_dynamics: non-finite input");
    if (!finite(T) || T < 0.0)
        throw invalid_argument_error("step_dynamics: sampling time must be finite and >= 0");
}

} // namespace

bool validate_physical(const CthpParams& params) {
    return finite(params.alpha) && finite(params.beta) && finite(params.tau) &&
           params.alpha >= 0.0 && params.beta >= 0.0 && params.tau > 0.0;
}

AugmentedState AugmentedState::from_vector(const Vec5& xi) {
    return {xi(0), xi(1), xi(2), xi(3), xi(4)};
}

Vec5 AugmentedState::to_vector() const {
    Vec5 xi;
    xi << p, v, alpha, beta, tau;
    return xi;
}

PlatoonState step_dynamics(const PlatoonState& s, const CthpParams& params,
                           const ControlInput& input, double T) {
    require_finite_step_inputs(s, params, input, T);
    const double dv = input.u - s.v;
    return {s.p + T * dv,
            s.v + T * (params.alpha * (s.p - params.tau * s.v) + params.beta * dv + input.d)};
}

AugmentedState step_augmented(const AugmentedState& xi, const ControlInput& input, double T) {
    const PlatoonState next = step_dynamics(xi.state(), xi.params(), input, T);
    return {next.p, next.v, xi.alpha, xi.beta, xi.tau};
}

std::pair<double, double> measure(const AugmentedState& xi) {
    return {xi.p, xi.v};
}

CthpParams params_from_ls_coeffs(const LsCoeffs& x, double T) {
    if (!finite(x.x1) || !finite(x.x2) || !finite(x.x3))
        throw invalid_argument_error("params_from_ls_coeffs: non-finite coefficients");
    if (!finite(T) || T <= 0.0)
        throw invalid_argument_error("params_from_ls_coeffs: sampling time must be > 0");
    if (x.x3 == 0.0)
        throw degenerate_recovery_error(
            "params_from_ls_coeffs: x3 = 0 (alpha = 0), time headway is unrecoverable");
    return {x.x3 / T, x.x2 / T, (1.0 - x.x1 - x.x2) / x.x3};
}

LsCoeffs ls_coeffs_from_params(const CthpParams& params, double T) {
    if (!finite(params.alpha) || !finite(params.beta) || !finite(params.tau))
        throw invalid_argument_error("ls_coeffs_from_params: non-finite parameters");
    if (!finite(T) || T <= 0.0)
        throw invalid_argument_error("ls_coeffs_from_params: sampling time must be > 0");
    return {1.0 - (params.alpha * params.tau + params.beta) * T, params.beta * T,
            params.alpha * T};
}

} // namespace acckit
