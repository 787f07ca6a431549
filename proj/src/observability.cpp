#include "acckit/observability.hpp"

#include <cmath>
#include <limits>

namespace acckit {

Mat5 observability_matrix(const AugmentedState& xi, double u, double T) {
    if (!xi.to_vector().allFinite() || !std::isfinite(u))
        throw invalid_argument_error("observability_matrix: non-finite inputs");
    if (!std::isfinite(T) || T <= 0.0)
        throw invalid_argument_error("observability_matrix: sampling time must be > 0");

    const double p = xi.p, v = xi.v, a = xi.alpha, b = xi.beta, t = xi.tau;
    const double T2 = T * T;
    const double gap_err = p - t * v; // gap deviation from the tau-equilibrium manifold
    const double dv = u - v;

    Mat5 O;
    O.row(0) << 1, 0, 0, 0, 0;
    O.row(1) << 1, -T, 0, 0, 0;
    O.row(2) << 1.0 - a * T2, -2.0 * T + (t * a + b) * T2, -gap_err * T2, -dv * T2, a * v * T2;
    O.row(3) << 0, 1, 0, 0, 0;
    O.row(4) << a * T, -a * t * T, gap_err * T, dv * T, -a * v * T;
    return O;
}

namespace {

double rank_tolerance(const Eigen::MatrixXd& M, double tol) {
    if (tol >= 0.0) return tol;
    return static_cast<double>(std::max(M.rows(), M.cols())) *
           std::numeric_limits<double>::epsilon();
}

} // namespace

int numeric_rank(const Eigen::MatrixXd& M, double tol) {
    if (!M.allFinite())
        throw invalid_argument_error("numeric_rank: non-finite matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = rank_tolerance(M, tol) * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return rank;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double tol) {
    if (!M.allFinite())
        throw invalid_argument_error("null_space: non-finite matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = rank_tolerance(M, tol) * smax;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

std::vector<Vec5> closed_form_kernel(const AugmentedState& xi, double u, double T,
                                     double eq_tol) {
    (void)T;
    const double gap_err = xi.p - xi.tau * xi.v;
    const double dv = u - xi.v;
    if (std::abs(dv) <= eq_tol && std::abs(gap_err) <= eq_tol) {
        // At equilibrium neither gain is visible: kernel is the alpha/beta plane.
        Vec5 e3 = Vec5::Zero(), e4 = Vec5::Zero();
        e3(2) = 1.0;
        e4(3) = 1.0;
        return {e3, e4};
    }
    if (std::abs(gap_err) <= eq_tol)
        return {}; // closed form would divide by p - tau v; caller falls back to the SVD

    Vec5 k1 = Vec5::Zero(), k2 = Vec5::Zero();
    k1(2) = -dv / gap_err;
    k1(3) = 1.0;
    k2(2) = xi.alpha * xi.v / gap_err;
    k2(4) = 1.0;
    return {k1.normalized(), k2.normalized()};
}

OrcReport classify_observability(const AugmentedState& xi, double u, double T, double eq_tol) {
    OrcReport rep;
    rep.matrix = observability_matrix(xi, u, T);
    rep.rank = numeric_rank(rep.matrix);
    rep.nullity = 5 - rep.rank;
    const Eigen::MatrixXd kernel = null_space(rep.matrix);
    rep.null_basis.reserve(static_cast<std::size_t>(kernel.cols()));
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
        rep.null_basis.push_back(kernel.col(c));
    const double gap_err = xi.p - xi.tau * xi.v;
    const double dv = u - xi.v;
    if (std::abs(dv) <= eq_tol && std::abs(gap_err) <= eq_tol)
        rep.regime = Regime::equilibrium;
    else if (std::abs(gap_err) <= eq_tol)
        rep.regime = Regime::near_equilibrium;
    else
        rep.regime = Regime::non_equilibrium;
    rep.observable = rep.rank == 5;
    return rep;
}

} // namespace acckit
