#include "acckit/sigma_filter.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "acckit/errors.hpp"

namespace acckit {
namespace {

bool finite_all(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

// Unpivoted lower Cholesky that tolerates positive-semidefinite input: a
// pivot within tolerance of zero produces a zero column instead of failing.
// Keeps the natural column order, so diag(4, 9) factors to diag(2, 3).
// Returns false on a pivot that is negative beyond tolerance.
bool tolerant_cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
    const Eigen::Index n = a.rows();
    l = Eigen::MatrixXd::Zero(n, n);
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       std::max(a.diagonal().cwiseAbs().maxCoeff(), 1.0e-300);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -tol) return false;
        if (d <= tol) continue; // semidefinite direction: leave the column zero
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

Eigen::MatrixXd chol_or_throw(const Eigen::MatrixXd& cov) {
    Eigen::MatrixXd l;
    if (!tolerant_cholesky(cov, l))
        throw numerical_breakdown_error("covariance is not positive semidefinite after conditioning");
    return l;
}

void check_noise(const NoiseConfig& noise, Eigen::Index n) {
    if (noise.Q.rows() != n || noise.Q.cols() != n)
        throw invalid_config_error("process noise Q must be " + std::to_string(n) + "x" +
                                   std::to_string(n));
    if (noise.R.rows() != 2 || noise.R.cols() != 2)
        throw invalid_config_error("measurement noise R must be 2x2");
    if (!finite_all(noise.Q) || !finite_all(noise.R))
        throw invalid_config_error("noise covariances must be finite");
}

} // namespace

double UtConfig::lambda(int n) const {
    if (n < 1) throw invalid_config_error("sigma-point dimension must be positive");
    if (!std::isfinite(a) || a < 1.0e-4 || a > 1.0)
        throw invalid_config_error("unscented spread parameter a must lie in [1e-4, 1]");
    const double bb = effective_b(n);
    if (!std::isfinite(bb)) throw invalid_config_error("unscented parameter b must be finite");
    if (!std::isfinite(eps) || eps < 0.0)
        throw invalid_config_error("unscented parameter eps must be finite and non-negative");
    const double lam = a * a * (static_cast<double>(n) + bb) - static_cast<double>(n);
    if (static_cast<double>(n) + lam <= 0.0)
        throw invalid_config_error("unscented scaling requires n + lambda > 0");
    return lam;
}

double UtConfig::delta(int n) const { return std::sqrt(static_cast<double>(n) + lambda(n)); }

NoiseConfig NoiseConfig::dukf_defaults() {
    NoiseConfig noise;
    noise.Q = Eigen::VectorXd{{2.0e-5, 5.0e-6, 1.0e-6, 1.0e-6, 1.0e-6}}.asDiagonal();
    noise.R = Eigen::VectorXd{{0.8, 0.2}}.asDiagonal();
    return noise;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ut_weights(int n, const UtConfig& cfg) {
    const double lam = cfg.lambda(n);
    const double denom = static_cast<double>(n) + lam;
    Eigen::VectorXd w_m = Eigen::VectorXd::Constant(2 * n + 1, 1.0 / (2.0 * denom));
    Eigen::VectorXd w_c = w_m;
    w_m(0) = lam / denom;
    w_c(0) = w_m(0) + 1.0 - cfg.a * cfg.a + cfg.eps;
    return {std::move(w_m), std::move(w_c)};
}

Eigen::MatrixXd condition_covariance(Eigen::MatrixXd m) {
    if (m.rows() != m.cols()) throw invalid_argument_error("covariance must be square");
    if (!finite_all(m)) throw numerical_breakdown_error("covariance contains non-finite entries");
    m = symmetrized(m);
    Eigen::MatrixXd l;
    if (tolerant_cholesky(m, l)) return m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_breakdown_error("eigenvalue computation failed while conditioning covariance");
    const double lam_min = es.eigenvalues().minCoeff();
    if (!std::isfinite(lam_min))
        throw numerical_breakdown_error("covariance eigenvalues are non-finite");

    double scale = 10.0;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (int attempt = 0; attempt < 3; ++attempt, scale *= 10.0) {
        Eigen::MatrixXd candidate = m + scale * std::abs(lam_min) * eye;
        if (tolerant_cholesky(candidate, l)) return candidate;
    }
    throw numerical_breakdown_error("covariance could not be repaired by jitter");
}

SigmaSet generate_sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& spread_source,
                               const UtConfig& cfg) {
    const Eigen::Index n = mean.size();
    if (n < 1) throw invalid_argument_error("sigma-point mean must be non-empty");
    if (spread_source.rows() != n || spread_source.cols() != n)
        throw invalid_argument_error("spread source must be square and match the mean dimension");
    if (!mean.allFinite()) throw numerical_breakdown_error("sigma-point mean is non-finite");

    const Eigen::MatrixXd cov = condition_covariance(spread_source);
    const Eigen::MatrixXd l = chol_or_throw(cov);
    const double del = cfg.delta(static_cast<int>(n));

    SigmaSet set;
    set.points.resize(n, 2 * n + 1);
    set.points.col(0) = mean;
    for (Eigen::Index i = 0; i < n; ++i) {
        set.points.col(1 + i) = mean + del * l.col(i);
        set.points.col(1 + n + i) = mean - del * l.col(i);
    }
    auto [w_m, w_c] = ut_weights(static_cast<int>(n), cfg);
    set.w_m = std::move(w_m);
    set.w_c = std::move(w_c);
    return set;
}

std::pair<GaussianBelief, SigmaSet> predict(const GaussianBelief& belief, const ControlInput& input,
                                            const NoiseConfig& noise, const UtConfig& cfg,
                                            double T) {
    if (belief.mean.size() != 5)
        throw invalid_argument_error("joint CTHP filter state must be 5-dimensional");
    check_noise(noise, 5);

    SigmaSet set = generate_sigma_points(belief.mean, belief.cov, cfg);
    for (Eigen::Index i = 0; i < set.points.cols(); ++i) {
        const AugmentedState xi = AugmentedState::from_vector(set.points.col(i));
        set.points.col(i) = step_augmented(xi, input, T).to_vector();
    }
    if (!finite_all(set.points))
        throw numerical_breakdown_error("sigma-point propagation produced non-finite states");

    GaussianBelief out;
    out.mean = set.points * set.w_m;
    const Eigen::MatrixXd centered = set.points.colwise() - out.mean;
    out.cov = condition_covariance(
        centered * set.w_c.asDiagonal() * centered.transpose() + noise.Q);
    return {std::move(out), std::move(set)};
}

GaussianBelief update(const GaussianBelief& predicted, double p_meas, double v_meas,
                      const NoiseConfig& noise, const UtConfig& cfg, bool redraw) {
    const Eigen::Index n = predicted.mean.size();
    if (n < 2) throw invalid_argument_error("filter state must contain at least gap and velocity");
    check_noise(noise, n);
    if (!std::isfinite(p_meas) || !std::isfinite(v_meas))
        throw invalid_argument_error("measurement must be finite");

    const Eigen::MatrixXd& spread = redraw ? predicted.cov : noise.Q;
    const SigmaSet set = generate_sigma_points(predicted.mean, spread, cfg);

    const Eigen::MatrixXd y_pts = set.points.topRows(2);
    const Eigen::Vector2d y_hat = y_pts * set.w_m;
    const Eigen::MatrixXd xc = set.points.colwise() - predicted.mean;
    const Eigen::MatrixXd yc = y_pts.colwise() - y_hat;
    const Eigen::MatrixXd p_yy =
        symmetrized(yc * set.w_c.asDiagonal() * yc.transpose() + noise.R);
    const Eigen::MatrixXd p_xy = xc * set.w_c.asDiagonal() * yc.transpose();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(p_yy);
    if (ldlt.info() != Eigen::Success)
        throw numerical_breakdown_error("innovation covariance factorization failed");
    const Eigen::MatrixXd gain = ldlt.solve(p_xy.transpose()).transpose();

    GaussianBelief out;
    out.mean = predicted.mean + gain * (Eigen::Vector2d(p_meas, v_meas) - y_hat);
    if (!out.mean.allFinite())
        throw numerical_breakdown_error("measurement update produced a non-finite mean");
    out.cov = condition_covariance(predicted.cov - gain * p_xy.transpose());
    return out;
}

EstimateTrace run_dukf(const Trajectory& traj, const GaussianBelief& init,
                       const NoiseConfig& noise, const UtConfig& cfg, bool redraw) {
    if (traj.size() < 2) throw insufficient_data_error("filtering needs at least two samples");
    if (init.mean.size() != 5 || init.cov.rows() != 5 || init.cov.cols() != 5)
        throw invalid_argument_error("initial belief must be 5-dimensional");
    check_noise(noise, 5);

    GaussianBelief belief;
    belief.mean = init.mean;
    belief.cov = condition_covariance(init.cov);

    EstimateTrace trace;
    const std::size_t k_total = traj.size();
    trace.t.reserve(k_total);
    trace.mean.reserve(k_total);
    trace.cov_diag.reserve(k_total);
    trace.innovation.reserve(k_total);

    double abs_gap = 0.0;
    double abs_vel = 0.0;
    auto record = [&](std::size_t k, const Eigen::Vector2d& innov) {
        trace.t.push_back(traj.t[k]);
        trace.mean.push_back(belief.mean.head<5>());
        trace.cov_diag.push_back(belief.cov.diagonal().head<5>());
        trace.innovation.push_back(innov);
        abs_gap += std::abs(belief.mean(0) - traj.p[k]);
        abs_vel += std::abs(belief.mean(1) - traj.v[k]);
    };

    record(0, {traj.p[0] - belief.mean(0), traj.v[0] - belief.mean(1)});
    for (std::size_t k = 1; k < k_total; ++k) {
        if (!std::isfinite(traj.p[k]) || !std::isfinite(traj.v[k]))
            throw numerical_breakdown_error("non-finite measurement at step " + std::to_string(k));
        try {
            const GaussianBelief pred =
                predict(belief, ControlInput{traj.u[k - 1], 0.0}, noise, cfg, traj.T).first;
            const Eigen::Vector2d innov{traj.p[k] - pred.mean(0), traj.v[k] - pred.mean(1)};
            belief = update(pred, traj.p[k], traj.v[k], noise, cfg, redraw);
            record(k, innov);
        } catch (const numeric_error& e) {
            throw numerical_breakdown_error("step " + std::to_string(k) + ": " + e.what());
        }
    }

    trace.mae_gap = abs_gap / static_cast<double>(k_total);
    trace.mae_velocity = abs_vel / static_cast<double>(k_total);
    const Vec5& last = trace.mean.back();
    trace.final_params = CthpParams{last(2), last(3), last(4)};
    return trace;
}

void write_trace_csv(const EstimateTrace& trace, const Trajectory& traj, const std::string& path) {
    if (trace.t.size() != traj.size())
        throw invalid_argument_error("trace and trajectory lengths differ");
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "t,p_meas,v_meas,p_hat,v_hat,alpha_hat,beta_hat,tau_hat,"
           "p_var,v_var,alpha_var,beta_var,tau_var\n";
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        const Vec5& m = trace.mean[k];
        const Vec5& d = trace.cov_diag[k];
        out << format_double(trace.t[k]) << ',' << format_double(traj.p[k]) << ','
            << format_double(traj.v[k]) << ',' << format_double(m(0)) << ',' << format_double(m(1))
            << ',' << format_double(m(2)) << ',' << format_double(m(3)) << ',' << format_double(m(4))
            << ',' << format_double(d(0)) << ',' << format_double(d(1)) << ',' << format_double(d(2))
            << ',' << format_double(d(3)) << ',' << format_double(d(4)) << '\n';
    }
    if (!out.good()) throw io_error("failed while writing '" + path + "'");
}

} // namespace acckit
