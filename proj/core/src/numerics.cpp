#include "edgeib/numerics.hpp"

#include <cmath>

namespace edgeib {

double lambert_w0(double x, const ToleranceConfig& tol) {
    tol.validate();
    if (std::isnan(x) || x < 0.0)
        throw std::invalid_argument("lambert_w0: argument must be >= 0");
    if (x == 0.0) return 0.0;

    // Seed: asymptotic expansion for large x, otherwise Winitzki's global
    // approximation, accurate to a few percent on [0, inf).
    double w;
    if (x > 1e100) {
        // Solve w + log w = log x in log space; w e^w would overflow.
        const double lx = std::log(x);
        w = lx - std::log(lx);
        for (int it = 0; it < tol.max_iter; ++it) {
            const double f = w + std::log(w) - lx;
            if (std::abs(f) <= tol.rel_tol) break;
            w -= f * w / (w + 1.0);
        }
        return w;
    }
    if (x > std::exp(1.0)) {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    } else {
        const double a = std::log1p(x);
        w = a * (1.0 - std::log1p(a) / (2.0 + a));
    }

    const double target = tol.rel_tol * std::max(1.0, x);
    for (int it = 0; it < tol.max_iter; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= 0.1 * target) break;
        // Halley step for f(w) = w e^w - x.
        const double fp = ew * (1.0 + w);
        const double denom = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
        w -= f / denom;
        if (w < 0.0) w = 0.0;  // principal branch, x >= 0
    }
    return w;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd>
generalized_symmetric_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("generalized_symmetric_eig: dimension mismatch");

    const double a_scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double b_scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-8 * a_scale)
        throw std::invalid_argument("generalized_symmetric_eig: A is not symmetric");
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-8 * b_scale)
        throw std::invalid_argument("generalized_symmetric_eig: B is not symmetric");

    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success)
        throw NumericalError("generalized_symmetric_eig: B is not positive definite (Cholesky failed)");

    // Cholesky reduction B = L L^T, then a standard symmetric eigensolve of
    // L^{-1} A L^{-T}; this is what Eigen's generalized solver does internally.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::Ax_lBx | Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw NumericalError("generalized_symmetric_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

bool is_positive_semidefinite(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("is_positive_semidefinite: matrix must be square");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw std::invalid_argument("is_positive_semidefinite: matrix is not symmetric within tol");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("is_positive_semidefinite: eigensolver did not converge");
    const double lo = es.eigenvalues().minCoeff();
    const double norm2 = std::max(std::abs(es.eigenvalues().minCoeff()),
                                  std::abs(es.eigenvalues().maxCoeff()));
    return lo >= -tol * norm2;
}

}  // namespace edgeib
