#include "acckit/lsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "acckit/errors.hpp"

namespace acckit {
namespace {

void check_regression(const Regression& reg) {
    if (reg.H.cols() != 3)
        throw invalid_argument_error("regression must have three coefficient columns");
    if (reg.H.rows() != reg.z.size() || reg.H.rows() < 1)
        throw invalid_argument_error("regression rows and targets must match and be non-empty");
    if (!reg.H.allFinite() || !reg.z.allFinite())
        throw invalid_argument_error("regression contains non-finite entries");
}

// Whitened core: assumes unit row weights have already been applied.
LsCoeffs solve_whitened(const Eigen::MatrixXd& h, const Eigen::VectorXd& z, double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw invalid_argument_error("ridge regularizer must be finite and non-negative");

    Eigen::Vector3d x;
    if (sigma == 0.0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.rank() < 3)
            throw rank_deficient_error(
                "regressor matrix is rank-deficient; an unregularized solve is not determined");
        x = svd.solve(z);
    } else {
        const Eigen::Matrix3d a =
            h.transpose() * h + sigma * Eigen::Matrix3d::Identity();
        x = Eigen::LDLT<Eigen::Matrix3d>(a).solve(h.transpose() * z);
    }
    if (!x.allFinite()) throw numerical_breakdown_error("least-squares solve produced non-finite coefficients");
    return LsCoeffs{x(0), x(1), x(2)};
}

} // namespace

Regression build_regression(const Trajectory& traj) {
    if (traj.size() < 4)
        throw insufficient_data_error(
            "identifying three coefficients needs at least four samples");
    const Eigen::Index rows = static_cast<Eigen::Index>(traj.size()) - 1;
    Regression reg;
    reg.H.resize(rows, 3);
    reg.z.resize(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        reg.H(k, 0) = traj.v[static_cast<std::size_t>(k)];
        reg.H(k, 1) = traj.u[static_cast<std::size_t>(k)];
        reg.H(k, 2) = traj.p[static_cast<std::size_t>(k)];
        reg.z(k) = traj.v[static_cast<std::size_t>(k) + 1];
    }
    return reg;
}

LsCoeffs batch_solve(const Regression& reg, double sigma) {
    check_regression(reg);
    return solve_whitened(reg.H, reg.z, sigma);
}

LsCoeffs batch_solve(const Regression& reg, double sigma, const Eigen::VectorXd& r_diag) {
    check_regression(reg);
    if (r_diag.size() != reg.H.rows())
        throw invalid_argument_error("row-variance vector must have one entry per regression row");
    if (!r_diag.allFinite() || (r_diag.array() <= 0.0).any())
        throw invalid_argument_error("row variances must be finite and positive");
    const Eigen::VectorXd w = r_diag.cwiseSqrt().cwiseInverse();
    return solve_whitened(w.asDiagonal() * reg.H, w.asDiagonal() * reg.z, sigma);
}

LsCoeffs batch_solve(const Regression& reg, double sigma, const Eigen::MatrixXd& r_full) {
    check_regression(reg);
    if (r_full.rows() != reg.H.rows() || r_full.cols() != reg.H.rows())
        throw invalid_argument_error("weighting matrix must be square with one row per regression row");
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (r_full + r_full.transpose()));
    if (llt.info() != Eigen::Success)
        throw invalid_argument_error("measurement weighting matrix must be positive definite");
    return solve_whitened(llt.matrixL().solve(reg.H), llt.matrixL().solve(reg.z), sigma);
}

Eigen::Matrix3d rls_cov_update(const Eigen::Matrix3d& p, const Eigen::Vector3d& h, double r) {
    if (!std::isfinite(r) || r <= 0.0)
        throw invalid_argument_error("sample variance must be finite and positive");
    if (!p.allFinite() || !h.allFinite())
        throw invalid_argument_error("covariance and regressor must be finite");
    const Eigen::Vector3d g = p * h;
    const double s = r + h.dot(g);
    if (!(s > 0.0)) throw numerical_breakdown_error("innovation variance is not positive");
    const Eigen::Matrix3d out = p - (g * g.transpose()) / s;
    return 0.5 * (out + out.transpose());
}

RlsState rls_step(const RlsState& state, const Eigen::Vector3d& h, double z, double r) {
    if (!std::isfinite(z)) throw invalid_argument_error("regression target must be finite");
    if (!std::isfinite(r) || r <= 0.0)
        throw invalid_argument_error("sample variance must be finite and positive");
    if (!std::isfinite(state.mu) || state.mu <= 0.0)
        throw invalid_config_error("forgetting factor must be finite and positive");
    if (!h.allFinite()) throw invalid_argument_error("regressor must be finite");
    if (h.isZero(0.0)) return state; // no information in this sample

    const Eigen::Vector3d g = state.P * h;
    const double s = r + h.dot(g);
    if (!(s > 0.0)) throw numerical_breakdown_error("innovation variance is not positive");

    RlsState next = state;
    next.x = state.x + g * ((z - h.dot(state.x)) / s);
    Eigen::Matrix3d p = (state.P - (g * g.transpose()) / s) / state.mu;
    next.P = 0.5 * (p + p.transpose());
    if (!next.x.allFinite() || !next.P.allFinite())
        throw numerical_breakdown_error("recursive update produced non-finite state");
    return next;
}

RlsState rls_warm_start(const Regression& reg, std::size_t rows, double sigma, double mu) {
    check_regression(reg);
    if (rows < 1 || static_cast<Eigen::Index>(rows) > reg.H.rows())
        throw invalid_argument_error("warm start needs between 1 and all regression rows");
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw invalid_argument_error("ridge regularizer must be finite and non-negative");
    if (!std::isfinite(mu) || mu <= 0.0)
        throw invalid_config_error("forgetting factor must be finite and positive");

    // Information recursion: each step maps (L, b) to mu (L + h h', b + h z),
    // so the result equals the state an rls_step chain from x = 0, P = I/sigma
    // would reach, without ever forming that huge prior covariance.
    Eigen::Matrix3d info = sigma * Eigen::Matrix3d::Identity();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < rows; ++k) {
        const Eigen::Vector3d h = reg.H.row(static_cast<Eigen::Index>(k)).transpose();
        info = mu * (info + h * h.transpose());
        b = mu * (b + h * reg.z(static_cast<Eigen::Index>(k)));
    }

    Eigen::LDLT<Eigen::Matrix3d> ldlt(info);
    RlsState state;
    state.mu = mu;
    state.P = ldlt.solve(Eigen::Matrix3d::Identity());
    state.x = ldlt.solve(b);
    if (ldlt.info() != Eigen::Success || !state.P.allFinite() || !state.x.allFinite())
        throw rank_deficient_error("warm-start rows do not determine the coefficients");
    state.P = 0.5 * (state.P + state.P.transpose());
    return state;
}

LsRunResult run_ls(const Trajectory& traj, LsMode mode, const LsConfig& cfg) {
    const Regression reg = build_regression(traj);

    LsRunResult result;
    if (mode == LsMode::batch) {
        result.coeffs = batch_solve(reg, cfg.sigma);
    } else {
        const double mu = mode == LsMode::recursive ? 1.0 : cfg.mu;
        RlsState state;
        Eigen::Index first = 0;
        if (cfg.warm_start_rows > 0) {
            const std::size_t m =
                std::min<std::size_t>(cfg.warm_start_rows, static_cast<std::size_t>(reg.H.rows()));
            state = rls_warm_start(reg, m, cfg.sigma, mu);
            first = static_cast<Eigen::Index>(m);
        } else {
            if (!std::isfinite(cfg.p0_scale) || cfg.p0_scale <= 0.0)
                throw invalid_config_error("prior covariance scale must be finite and positive");
            state.x = cfg.x0;
            state.P = cfg.p0_scale * Eigen::Matrix3d::Identity();
            state.mu = mu;
        }
        for (Eigen::Index k = first; k < reg.H.rows(); ++k)
            state = rls_step(state, reg.H.row(k).transpose(), reg.z(k));
        result.coeffs = LsCoeffs{state.x(0), state.x(1), state.x(2)};
    }

    result.params = params_from_ls_coeffs(result.coeffs, traj.T);

    // Closed-loop replay of the identified model against the recorded series.
    const std::size_t n = traj.size();
    PlatoonState sim{traj.p[0], traj.v[0]};
    double sum_p = 0.0;
    double sum_v = 0.0;
    bool diverged = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(sim.p) || !std::isfinite(sim.v)) {
            diverged = true;
            break;
        }
        sum_p += std::abs(sim.p - traj.p[k]);
        sum_v += std::abs(sim.v - traj.v[k]);
        if (k + 1 < n)
            sim = step_dynamics(sim, result.params, ControlInput{traj.u[k], 0.0}, traj.T);
    }
    const double inf = std::numeric_limits<double>::infinity();
    result.mae_gap = diverged ? inf : sum_p / static_cast<double>(n);
    result.mae_velocity = diverged ? inf : sum_v / static_cast<double>(n);
    return result;
}

} // namespace acckit
