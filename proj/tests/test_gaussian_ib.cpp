#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "edgeib/gaussian_ib.hpp"
#include "edgeib/numerics.hpp"

using namespace edgeib;

namespace {

GaussianSource scalar_source(double rho) {
    GaussianSource s;
    s.d_x = 1;
    s.d_y = 1;
    s.C_X = Eigen::MatrixXd::Constant(1, 1, 1.0);
    s.C_Y = Eigen::MatrixXd::Constant(1, 1, 1.0);
    s.C_XY = Eigen::MatrixXd::Constant(1, 1, rho);
    return s;
}

// Monte-Carlo oracle for the closed-form NMSE: simulate the generative model
// x = H y + w, encode t = A x + xi, fit the linear estimator from empirical
// covariances and measure the empirical MSE.
double monte_carlo_nmse(const GaussianSource& src, const Eigen::MatrixXd& A, int n_samples,
                        unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    const Eigen::MatrixXd& H = src.C_XY;
    const int d_t = static_cast<int>(A.rows());

    Eigen::MatrixXd T(n_samples, d_t), Y(n_samples, src.d_y);
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd y(src.d_y), w(src.d_x), xi(d_t);
        for (int i = 0; i < src.d_y; ++i) y[i] = nd(rng);
        for (int i = 0; i < src.d_x; ++i) w[i] = nd(rng);
        for (int i = 0; i < d_t; ++i) xi[i] = nd(rng);
        const Eigen::VectorXd x = H * y + w;
        T.row(s) = (A * x + xi).transpose();
        Y.row(s) = y.transpose();
    }
    const Eigen::MatrixXd sigma_t = T.transpose() * T / n_samples;
    const Eigen::MatrixXd sigma_yt = Y.transpose() * T / n_samples;
    const Eigen::MatrixXd west = sigma_yt * sigma_t.llt().solve(
                                                Eigen::MatrixXd::Identity(d_t, d_t));
    const double mse = (Y - T * west.transpose()).squaredNorm() / n_samples;
    return mse / src.C_Y.trace();
}

}  // namespace

TEST_CASE("solve_gib: independent source has no informative direction") {
    GaussianSource s;
    s.d_x = 3;
    s.d_y = 2;
    s.C_X = Eigen::MatrixXd::Identity(3, 3) * 2.0;
    s.C_Y = Eigen::MatrixXd::Identity(2, 2);
    s.C_XY = Eigen::MatrixXd::Zero(3, 2);
    const GibSolution sol = solve_gib(s);
    for (int i = 0; i < 3; ++i) {
        CHECK(sol.lambdas[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::isinf(sol.beta_crit[i]));
    }
    CHECK(sol.active_count(1e12) == 0);
}

TEST_CASE("solve_gib: scalar correlation case") {
    const GibSolution sol = solve_gib(scalar_source(0.5));
    CHECK(sol.lambdas[0] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(sol.beta_crit[0] == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(sol.r_vals[0] > 0.0);
}

TEST_CASE("solve_gib: eigenvalues match a dense nonsymmetric eigensolve") {
    const GaussianSource src = make_synthetic_source(5, 2, 2.0, 99);
    const GibSolution sol = solve_gib(src);

    // Oracle route: eigenvalues of C_{X|Y} C_X^{-1} formed explicitly.
    const Eigen::MatrixXd cond =
        src.C_X - src.C_XY * src.C_Y.llt().solve(src.C_XY.transpose());
    const Eigen::MatrixXd M = cond * src.C_X.inverse();
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    Eigen::VectorXd oracle = es.eigenvalues().real();
    std::sort(oracle.data(), oracle.data() + oracle.size());

    for (int i = 0; i < 5; ++i) CHECK(sol.lambdas[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("solve_gib rejects invalid sources") {
    GaussianSource s = scalar_source(1.5);  // |rho| > 1: joint not PSD
    CHECK_THROWS_AS(solve_gib(s), std::invalid_argument);

    GaussianSource bad = scalar_source(0.5);
    bad.C_X(0, 0) = -1.0;
    CHECK_THROWS_AS(solve_gib(bad), std::invalid_argument);
}

TEST_CASE("operating_point: scalar evaluations") {
    GaussianSource s = scalar_source(std::sqrt(0.5));  // lambda = 0.5, beta_c = 2
    const GibSolution sol = solve_gib(s);
    REQUIRE(sol.lambdas[0] == doctest::Approx(0.5).epsilon(1e-10));

    SUBCASE("below the first critical beta everything is idle") {
        const GibOperatingPoint op = operating_point(sol, 1.5);
        CHECK(op.n_beta == 0);
        CHECK(op.A.rows() == 0);
        CHECK(op.complexity_bits == 0.0);
        CHECK(op.relevance_bits == 0.0);
        CHECK(op.nmse == 1.0);
    }
    SUBCASE("direct evaluation at beta = 4") {
        const GibOperatingPoint op = operating_point(sol, 4.0);
        CHECK(op.n_beta == 1);
        CHECK(op.complexity_bits == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-12));
        CHECK(op.relevance_bits ==
              doctest::Approx(0.5 * std::log2(3.0) - 0.5 * std::log2(2.0)).epsilon(1e-12));
    }
    SUBCASE("a component entering at its critical beta contributes nothing") {
        const GibOperatingPoint op = operating_point(sol, 2.0);
        CHECK(op.n_beta == 1);
        CHECK(op.complexity_bits == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(op.relevance_bits == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(operating_point(sol, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(operating_point(sol, -1.0), std::invalid_argument);
}

TEST_CASE("compute_nmse: limits in the scalar case") {
    const GibSolution sol = solve_gib(scalar_source(0.5));
    CHECK(compute_nmse(sol, 1.0) == 1.0);  // below beta_c = 4
    // beta -> inf approaches the linear-MMSE floor 1 - rho^2
    CHECK(compute_nmse(sol, 4.0e6) == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("compute_nmse matches the Monte-Carlo estimator oracle") {
    const GaussianSource src = make_synthetic_source(6, 2, 3.0, 1234);
    const GibSolution sol = solve_gib(src);
    const double beta = 2.0 * sol.beta_crit[0];
    const GibOperatingPoint op = operating_point(sol, beta);
    REQUIRE(op.n_beta > 0);

    const double mc = monte_carlo_nmse(src, op.A, 100000, 77);
    CHECK(op.nmse == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("relevance_complexity_curve: shape and validation") {
    const GibSolution sol = solve_gib(scalar_source(0.5));  // beta_c = 4

    SUBCASE("grid entirely below the first critical beta") {
        const auto curve = relevance_complexity_curve(sol, {1.0, 2.0, 3.0});
        for (const auto& op : curve) {
            CHECK(op.complexity_bits == 0.0);
            CHECK(op.relevance_bits == 0.0);
        }
    }
    SUBCASE("monotone in beta, complexity dominates relevance") {
        std::vector<double> grid;
        for (int i = 0; i <= 200; ++i) grid.push_back(1.0 + 0.25 * i);
        const auto curve = relevance_complexity_curve(sol, grid);
        for (size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].complexity_bits >= curve[i - 1].complexity_bits - 1e-12);
            CHECK(curve[i].relevance_bits >= curve[i - 1].relevance_bits - 1e-12);
            CHECK(curve[i].nmse <= curve[i - 1].nmse + 1e-12);
        }
        for (const auto& op : curve) CHECK(op.relevance_bits <= op.complexity_bits + 1e-12);
    }
    SUBCASE("invalid grids") {
        CHECK_THROWS_AS(relevance_complexity_curve(sol, {}), std::invalid_argument);
        CHECK_THROWS_AS(relevance_complexity_curve(sol, {2.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(relevance_complexity_curve(sol, {-1.0, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("continuity across every finite critical beta") {
    const GaussianSource src = make_synthetic_source(8, 3, 2.0, 5);
    const GibSolution sol = solve_gib(src);
    const double eps = 1e-6;
    for (int i = 0; i < 8; ++i) {
        const double bc = sol.beta_crit[i];
        if (!std::isfinite(bc)) continue;
        const auto lo = operating_point(sol, bc - eps);
        const auto hi = operating_point(sol, bc + eps);
        CHECK(std::abs(hi.complexity_bits - lo.complexity_bits) < 1e-4);
        CHECK(std::abs(hi.relevance_bits - lo.relevance_bits) < 1e-4);
    }
}

TEST_CASE("relevance is capped by I(X;Y)") {
    const GaussianSource src = make_synthetic_source(10, 4, 1.5, 42);
    const GibSolution sol = solve_gib(src);
    const double ceiling = sol.mutual_information_xy_bits();
    for (double beta : {1.5, 3.0, 10.0, 1e3, 1e6}) {
        const auto op = operating_point(sol, beta);
        CHECK(op.relevance_bits <= ceiling + 1e-9);
        CHECK(op.relevance_bits >= 0.0);
    }
}

TEST_CASE("nmse approaches the linear-MMSE floor for large beta") {
    const GaussianSource src = make_synthetic_source(10, 4, 1.5, 43);
    const GibSolution sol = solve_gib(src);
    const double floor = (src.C_Y.trace() -
                          (src.C_XY.transpose() * src.C_X.llt().solve(src.C_XY)).trace()) /
                         src.C_Y.trace();
    CHECK(compute_nmse(sol, 1e6 * sol.beta_crit[0]) == doctest::Approx(floor).epsilon(1e-6));
}

TEST_CASE("make_synthetic_source: structure and determinism") {
    SUBCASE("rank of the cross-covariance bounds the informative directions") {
        const GaussianSource src = make_synthetic_source(40, 3, 2.0, 17);
        const GibSolution sol = solve_gib(src);
        int below_one = 0;
        for (int i = 0; i < 40; ++i)
            if (sol.lambdas[i] < 1.0 - 1e-9) ++below_one;
        CHECK(below_one == 3);
    }
    SUBCASE("vanishing snr loses all correlation") {
        const GaussianSource src = make_synthetic_source(6, 2, 1e-12, 3);
        const GibSolution sol = solve_gib(src);
        for (int i = 0; i < 6; ++i) CHECK(sol.lambdas[i] > 1.0 - 1e-9);
    }
    SUBCASE("same seed reproduces the source exactly") {
        const GaussianSource a = make_synthetic_source(7, 2, 1.0, 1001);
        const GaussianSource b = make_synthetic_source(7, 2, 1.0, 1001);
        CHECK((a.C_X - b.C_X).norm() == 0.0);
        CHECK((a.C_XY - b.C_XY).norm() == 0.0);
    }
    CHECK_THROWS_AS(make_synthetic_source(2, 3, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_synthetic_source(3, 2, 0.0, 0), std::invalid_argument);
}

TEST_CASE("curve CSV header and numeric round-trip") {
    const GibSolution sol = solve_gib(scalar_source(0.5));
    const auto curve = relevance_complexity_curve(sol, {1.0, 4.5, 8.0});
    std::ostringstream os;
    write_curve_csv(os, curve);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "beta,n_beta,complexity_bits,relevance_bits,nmse");
    for (const auto& op : curve) {
        std::string line;
        REQUIRE(std::getline(is, line));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double beta, nb, cx, rel, nm;
        row >> beta >> nb >> cx >> rel >> nm;
        CHECK(beta == doctest::Approx(op.beta).epsilon(1e-12));
        CHECK(cx == doctest::Approx(op.complexity_bits).epsilon(1e-12));
        CHECK(rel == doctest::Approx(op.relevance_bits).epsilon(1e-12));
        CHECK(nm == doctest::Approx(op.nmse).epsilon(1e-12));
    }
}
