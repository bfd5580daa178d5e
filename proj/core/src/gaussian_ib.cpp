#include "edgeib/gaussian_ib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "edgeib/numerics.hpp"
#include "edgeib/rng.hpp"

namespace edgeib {

namespace {

constexpr double kLambdaFloor = 1e-12;    // keeps alpha_i finite on perfectly predictable directions
constexpr double kLambdaSlack = 1e-9;     // accepted numerical overshoot outside [0, 1]
constexpr double kLambdaOneBand = 1e-10;  // snap to 1: the critical beta is beyond any usable grid
constexpr double kJointPsdTol = 1e-9;

double log2_(double v) { return std::log2(v); }

}  // namespace

void GaussianSource::validate() const {
    if (d_x < 1 || d_y < 1)
        throw std::invalid_argument("GaussianSource: dimensions must be >= 1");
    if (C_X.rows() != d_x || C_X.cols() != d_x || C_Y.rows() != d_y || C_Y.cols() != d_y ||
        C_XY.rows() != d_x || C_XY.cols() != d_y)
        throw std::invalid_argument("GaussianSource: covariance dimensions inconsistent with d_x/d_y");

    auto check_pd = [](const Eigen::MatrixXd& M, const char* name) {
        const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
        if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
            throw std::invalid_argument(std::string("GaussianSource: ") + name + " is not symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument(std::string("GaussianSource: ") + name +
                                        " is not positive definite");
    };
    check_pd(C_X, "C_X");
    check_pd(C_Y, "C_Y");

    Eigen::MatrixXd joint(d_x + d_y, d_x + d_y);
    joint.topLeftCorner(d_x, d_x) = C_X;
    joint.topRightCorner(d_x, d_y) = C_XY;
    joint.bottomLeftCorner(d_y, d_x) = C_XY.transpose();
    joint.bottomRightCorner(d_y, d_y) = C_Y;
    if (!is_positive_semidefinite(joint, kJointPsdTol))
        throw std::invalid_argument("GaussianSource: joint covariance is not positive semidefinite");
}

int GibSolution::active_count(double beta) const {
    int n = 0;
    for (Eigen::Index i = 0; i < beta_crit.size(); ++i) {
        if (beta >= beta_crit[i]) ++n;
        else break;  // beta_crit ascending
    }
    return n;
}

double GibSolution::mutual_information_xy_bits() const {
    double bits = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (lambdas[i] < 1.0) bits -= 0.5 * log2_(lambdas[i]);
    return bits;
}

GibSolution solve_gib(const GaussianSource& source) {
    source.validate();

    // C_{X|Y} = C_X - C_XY C_Y^{-1} C_XY^T, kept symmetric explicitly.
    Eigen::LLT<Eigen::MatrixXd> llt_y(source.C_Y);
    Eigen::MatrixXd cond = source.C_X - source.C_XY * llt_y.solve(source.C_XY.transpose());
    cond = 0.5 * (cond + cond.transpose());

    // Left eigenvectors of C_{X|Y} C_X^{-1} are the solutions of the
    // generalized symmetric problem C_{X|Y} u = lambda C_X u.
    auto [vals, vecs] = generalized_symmetric_eig(cond, source.C_X);

    GibSolution sol;
    const Eigen::Index n = vals.size();
    sol.lambdas.resize(n);
    sol.beta_crit.resize(n);
    sol.r_vals.resize(n);
    sol.vectors = vecs.transpose();  // row i = v_i
    for (Eigen::Index i = 0; i < n; ++i) {
        double lam = vals[i];
        if (lam < -kLambdaSlack || lam > 1.0 + kLambdaSlack)
            throw NumericalError("solve_gib: eigenvalue outside [0,1] beyond tolerance; "
                                 "source statistics are inconsistent");
        lam = std::clamp(lam, kLambdaFloor, 1.0);
        if (lam > 1.0 - kLambdaOneBand) lam = 1.0;
        sol.lambdas[i] = lam;
        sol.beta_crit[i] = lam < 1.0 ? 1.0 / (1.0 - lam) : std::numeric_limits<double>::infinity();
        sol.r_vals[i] = sol.vectors.row(i) * source.C_X * sol.vectors.row(i).transpose();
    }
    sol.source = source;
    return sol;
}

GibOperatingPoint operating_point(const GibSolution& sol, double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("operating_point: beta must be > 0");

    GibOperatingPoint op;
    op.beta = beta;
    op.n_beta = sol.active_count(beta);
    const int n = op.n_beta;
    op.A.resize(n, sol.source.d_x);

    double complexity = 0.0;
    double penalty = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lam = sol.lambdas[i];
        const double alpha2 = (beta * (1.0 - lam) - 1.0) / (lam * sol.r_vals[i]);
        op.A.row(i) = std::sqrt(std::max(alpha2, 0.0)) * sol.vectors.row(i);
        complexity += 0.5 * log2_((beta - 1.0) * (1.0 - lam) / lam);
        penalty += 0.5 * log2_(beta * (1.0 - lam));
    }
    op.complexity_bits = complexity;
    op.relevance_bits = complexity - penalty;
    op.nmse = compute_nmse(sol, beta);
    return op;
}

double compute_nmse(const GibSolution& sol, double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("compute_nmse: beta must be > 0");

    const int n = sol.active_count(beta);
    if (n == 0) return 1.0;

    Eigen::MatrixXd A(n, sol.source.d_x);
    for (int i = 0; i < n; ++i) {
        const double lam = sol.lambdas[i];
        const double alpha2 = (beta * (1.0 - lam) - 1.0) / (lam * sol.r_vals[i]);
        A.row(i) = std::sqrt(std::max(alpha2, 0.0)) * sol.vectors.row(i);
    }

    // t = A x + xi, xi ~ N(0, I):
    //   Sigma_T  = A C_X A^T + I
    //   Sigma_YT = C_XY^T A^T
    // MSE = tr(C_Y) - tr(Sigma_YT Sigma_T^{-1} Sigma_YT^T)
    Eigen::MatrixXd sigma_t = A * sol.source.C_X * A.transpose() + Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sigma_yt = sol.source.C_XY.transpose() * A.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_t);
    if (llt.info() != Eigen::Success)
        throw NumericalError("compute_nmse: encoder output covariance not positive definite");
    const double recovered = (sigma_yt * llt.solve(sigma_yt.transpose())).trace();
    const double total = sol.source.C_Y.trace();
    return std::clamp((total - recovered) / total, 0.0, 1.0);
}

std::vector<GibOperatingPoint> relevance_complexity_curve(const GibSolution& sol,
                                                          const std::vector<double>& betas) {
    if (betas.empty())
        throw std::invalid_argument("relevance_complexity_curve: empty beta grid");
    for (size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0))
            throw std::invalid_argument("relevance_complexity_curve: betas must be > 0");
        if (i > 0 && !(betas[i] > betas[i - 1]))
            throw std::invalid_argument("relevance_complexity_curve: beta grid must be strictly increasing");
    }
    std::vector<GibOperatingPoint> curve;
    curve.reserve(betas.size());
    for (double b : betas) curve.push_back(operating_point(sol, b));
    return curve;
}

GaussianSource make_synthetic_source(int d_x, int d_y, double snr, std::uint64_t seed) {
    if (d_y < 1 || d_y > d_x)
        throw std::invalid_argument("make_synthetic_source: requires d_x >= d_y >= 1");
    if (!(snr > 0.0))
        throw std::invalid_argument("make_synthetic_source: snr must be > 0");

    NormalStream rng(seed);
    const double scale = std::sqrt(snr / static_cast<double>(d_y));
    Eigen::MatrixXd H(d_x, d_y);
    for (int i = 0; i < d_x; ++i)
        for (int j = 0; j < d_y; ++j) H(i, j) = scale * rng.next();

    GaussianSource src;
    src.d_x = d_x;
    src.d_y = d_y;
    src.C_X = H * H.transpose() + Eigen::MatrixXd::Identity(d_x, d_x);
    src.C_Y = Eigen::MatrixXd::Identity(d_y, d_y);
    src.C_XY = H;
    return src;
}

void write_curve_csv(std::ostream& out, const std::vector<GibOperatingPoint>& curve) {
    out << "beta,n_beta,complexity_bits,relevance_bits,nmse\n";
    out.precision(17);
    for (const auto& op : curve) {
        out << op.beta << ',' << op.n_beta << ',' << op.complexity_bits << ','
            << op.relevance_bits << ',' << op.nmse << '\n';
    }
}

}  // namespace edgeib
