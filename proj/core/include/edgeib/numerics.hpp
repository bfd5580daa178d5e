#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

namespace edgeib {

// Thrown when an iterative method or factorization fails on inputs that
// passed validation. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_iter = 100;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_iter < 1)
            throw std::invalid_argument("ToleranceConfig: tolerances must be positive, max_iter >= 1");
    }
};

/// Principal branch of the Lambert W function for x >= 0.
///
/// Solves w * exp(w) = x by Halley iteration from a Winitzki-style seed.
/// The result satisfies |w e^w - x| <= rel_tol * max(1, x).
double lambert_w0(double x, const ToleranceConfig& tol = {});

/// Solves the generalized symmetric eigenproblem A u = lambda B u with
/// B symmetric positive definite. Eigenvalues are returned ascending and
/// eigenvectors (columns) are B-orthonormal: u_i^T B u_j = delta_ij.
std::pair<Eigen::VectorXd, Eigen::MatrixXd>
generalized_symmetric_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// True iff the smallest eigenvalue of symmetric M is >= -tol * ||M||_2.
bool is_positive_semidefinite(const Eigen::MatrixXd& M, double tol);

}  // namespace edgeib
