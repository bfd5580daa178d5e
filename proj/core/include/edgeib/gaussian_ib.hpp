#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace edgeib {

/// Joint second-order statistics of an observation x (dimension d_x) and a
/// target y (dimension d_y). All random vectors are centered.
struct GaussianSource {
    int d_x = 0;
    int d_y = 0;
    Eigen::MatrixXd C_X;    // d_x x d_x, positive definite
    Eigen::MatrixXd C_Y;    // d_y x d_y, positive definite
    Eigen::MatrixXd C_XY;   // d_x x d_y cross-covariance

    /// Checks dimensions, positive definiteness of the marginals and
    /// positive semidefiniteness of the joint covariance.
    void validate() const;
};

/// Eigenstructure of C_{X|Y} C_X^{-1}. Every beta-dependent quantity of the
/// bottleneck encoder derives from it, so it is computed once per source.
struct GibSolution {
    Eigen::VectorXd lambdas;    // ascending, clamped to [1e-12, 1]
    Eigen::MatrixXd vectors;    // row i is the i-th left eigenvector v_i
    Eigen::VectorXd r_vals;     // r_i = v_i^T C_X v_i
    Eigen::VectorXd beta_crit;  // 1 / (1 - lambda_i), +inf when lambda_i = 1
    GaussianSource source;

    /// Number of active components at trade-off parameter beta.
    int active_count(double beta) const;

    /// Upper bound on relevance: I(X;Y) in bits.
    double mutual_information_xy_bits() const;
};

struct GibOperatingPoint {
    double beta = 0.0;
    int n_beta = 0;             // active components; also the encoder output dim
    Eigen::MatrixXd A;          // n_beta x d_x encoder matrix (0 x d_x when idle)
    double complexity_bits = 0.0;   // I(X; T_beta)
    double relevance_bits = 0.0;    // I(T_beta; Y)
    double nmse = 1.0;              // MSE of the optimal estimator / tr(C_Y)
};

/// Computes the closed-form bottleneck eigenstructure of a validated source.
GibSolution solve_gib(const GaussianSource& source);

/// Encoder matrix and information quantities at a given beta > 0.
GibOperatingPoint operating_point(const GibSolution& sol, double beta);

/// Normalized MSE of the best linear estimate of y from t = A x + xi,
/// xi ~ N(0, I). Equals 1 when no component is active.
double compute_nmse(const GibSolution& sol, double beta);

/// Operating points over a strictly increasing positive beta grid.
std::vector<GibOperatingPoint> relevance_complexity_curve(const GibSolution& sol,
                                                          const std::vector<double>& betas);

/// Linear-Gaussian synthetic source x = H y + w with exact covariances
/// C_X = H H^T + I, C_Y = I, C_XY = H. H has i.i.d. N(0, snr/d_y) entries
/// drawn deterministically from the seed.
GaussianSource make_synthetic_source(int d_x, int d_y, double snr, std::uint64_t seed);

/// CSV emission: header beta,n_beta,complexity_bits,relevance_bits,nmse.
void write_curve_csv(std::ostream& out, const std::vector<GibOperatingPoint>& curve);

}  // namespace edgeib
