#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ecca/errors.hpp"
#include "ecca/lasso.hpp"
#include "ecca/linalg.hpp"
#include "ecca/rng.hpp"

using namespace ecca;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (double& e : m.data()) e = rng.normal();
    return m;
}

// +-1 design with exactly orthogonal rows: X X^T = n I_p.
Matrix hadamard_rows(std::size_t p, std::size_t n) {
    Matrix h(n, n);
    h(0, 0) = 1.0;
    for (std::size_t size = 1; size < n; size *= 2) {
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = 0; j < size; ++j) {
                const double v = h(i, j);
                h(i, j + size) = v;
                h(i + size, j) = v;
                h(i + size, j + size) = -v;
            }
        }
    }
    Matrix x(p, n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < n; ++j) x(i, j) = h(i, j);
    return x;
}

double soft(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double objective(const Matrix& x, const std::vector<double>& y, const std::vector<double>& beta,
                 double lambda1) {
    double obj = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double r = y[i];
        for (std::size_t j = 0; j < beta.size(); ++j) r -= beta[j] * x(j, i);
        obj += r * r;
    }
    for (double b : beta) obj += lambda1 * std::fabs(b);
    return obj;
}

}  // namespace

TEST_CASE("full shrinkage at and above the exact threshold") {
    Rng rng(1);
    const Matrix x = random_matrix(5, 12, rng);
    std::vector<double> y(12);
    for (double& v : y) v = rng.normal();

    const double lambda_max = full_shrinkage_lambda(x, y);
    LassoConfig cfg;
    cfg.lambda1 = lambda_max * 1.0001;
    const LassoRowResult r = fit_row(x, y, cfg);
    for (double b : r.beta) CHECK(b == 0.0);
    CHECK(r.converged);

    cfg.lambda1 = lambda_max;  // boundary is still fully shrunk
    for (double b : fit_row(x, y, cfg).beta) CHECK(b == 0.0);
}

TEST_CASE("orthogonal design matches the closed-form soft threshold") {
    Rng rng(2);
    const std::size_t p = 8, n = 16;
    const Matrix x = hadamard_rows(p, n);
    std::vector<double> y(n);
    for (double& v : y) v = rng.normal(0.0, 2.0);

    LassoConfig cfg;
    cfg.lambda1 = 4.0;
    const LassoRowResult r = fit_row(x, y, cfg);
    for (std::size_t j = 0; j < p; ++j) {
        const double xy = dot(x.row(j), y.data(), n);
        const double expected = soft(xy, cfg.lambda1 / 2.0) / static_cast<double>(n);
        CHECK(std::fabs(r.beta[j] - expected) <= 1e-8);
    }

    // The exact solution certifies itself under the KKT conditions.
    Dataset data;
    data.x = x;
    data.y = Matrix(1, n);
    for (std::size_t i = 0; i < n; ++i) data.y(0, i) = y[i];
    LassoFit fit;
    fit.b_hat = Matrix(1, p);
    for (std::size_t j = 0; j < p; ++j) {
        const double xy = dot(x.row(j), y.data(), n);
        fit.b_hat(0, j) = soft(xy, cfg.lambda1 / 2.0) / static_cast<double>(n);
    }
    fit.lambda1 = cfg.lambda1;
    const std::vector<double> viol = kkt_check(fit, data);
    CHECK(viol[0] <= 1e-8 * std::max(1.0, full_shrinkage_lambda(x, y) / 2.0));
}

TEST_CASE("lambda zero recovers the least-squares solution") {
    Rng rng(3);
    const std::size_t p = 3, n = 20;
    const Matrix x = random_matrix(p, n, rng);
    std::vector<double> y(n);
    for (double& v : y) v = rng.normal();

    LassoConfig cfg;
    cfg.lambda1 = 0.0;
    cfg.tol = 1e-12;
    cfg.max_iters = 100000;
    const LassoRowResult r = fit_row(x, y, cfg);

    // Normal equations oracle.
    const Matrix s = gram(x, 1.0);
    Matrix xy(p, 1);
    for (std::size_t j = 0; j < p; ++j) xy(j, 0) = dot(x.row(j), y.data(), n);
    const Matrix beta_ls = solve_spd(s, xy);
    for (std::size_t j = 0; j < p; ++j) {
        CHECK(std::fabs(r.beta[j] - beta_ls(j, 0)) <= 1e-6);
    }
}

TEST_CASE("zero-norm feature rows stay pinned at zero") {
    Matrix x(2, 4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) x(0, i) = static_cast<double>(i) - 1.5;
    std::vector<double> y{1.0, -1.0, 0.5, 0.0};
    LassoConfig cfg;
    cfg.lambda1 = 0.01;
    const LassoRowResult r = fit_row(x, y, cfg);
    CHECK(r.beta[1] == 0.0);
    CHECK(r.converged);
}

TEST_CASE("max_iters cap returns the best iterate unconverged") {
    Rng rng(4);
    const Matrix x = random_matrix(10, 30, rng);
    std::vector<double> y(30);
    for (double& v : y) v = rng.normal();
    LassoConfig cfg;
    cfg.lambda1 = 0.1;
    cfg.max_iters = 1;
    const LassoRowResult r = fit_row(x, y, cfg);
    CHECK(!r.converged);
    CHECK(r.iters == 1);
}

TEST_CASE("fit_all with d=1 reduces to fit_row") {
    Rng rng(5);
    Dataset data;
    data.x = random_matrix(6, 25, rng);
    data.y = random_matrix(1, 25, rng);
    data.centered = true;

    LassoConfig cfg;
    cfg.lambda1 = 1.0;
    const LassoFit fit = fit_all(data, cfg);
    std::vector<double> y_row(data.y.row(0), data.y.row(0) + 25);
    const LassoRowResult row = fit_row(data.x, y_row, cfg);
    for (std::size_t j = 0; j < 6; ++j) CHECK(fit.b_hat(0, j) == row.beta[j]);
    CHECK(fit.supports[0].size() == [&] {
        std::size_t c = 0;
        for (double b : row.beta) c += b != 0.0;
        return c;
    }());
}

TEST_CASE("noiseless sparse truth is recovered at small lambda") {
    Rng rng(6);
    const std::size_t p = 30, n = 200, d = 3;
    const Matrix x = random_matrix(p, n, rng);
    Matrix b_star(d, p);
    b_star(0, 2) = 1.5;
    b_star(0, 7) = -0.8;
    b_star(1, 11) = 2.0;
    b_star(2, 0) = 0.6;
    b_star(2, 29) = -1.2;

    Dataset data;
    data.x = x;
    data.y = matmul(b_star, x);
    data.centered = true;

    LassoConfig cfg;
    cfg.lambda1 = 1e-4;
    cfg.tol = 1e-10;
    const LassoFit fit = fit_all(data, cfg);

    double err = 0.0;
    for (std::size_t i = 0; i < b_star.size(); ++i) {
        const double diff = fit.b_hat.data()[i] - b_star.data()[i];
        err += diff * diff;
    }
    CHECK(std::sqrt(err) <= 1e-3);

    // Supports cover the truth.
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < p; ++j) {
            if (b_star(k, j) != 0.0) {
                bool found = false;
                for (std::size_t idx : fit.supports[k]) found |= idx == j;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("serial and parallel row fits agree bitwise") {
    Rng rng(7);
    Dataset data;
    data.x = random_matrix(40, 60, rng);
    data.y = random_matrix(6, 60, rng);
    data.centered = true;

    LassoConfig cfg;
    cfg.lambda1 = 2.0;
    const LassoFit serial = fit_all(data, cfg, nullptr, 1);
    const LassoFit parallel = fit_all(data, cfg, nullptr, 4);
    CHECK(std::memcmp(serial.b_hat.data().data(), parallel.b_hat.data().data(),
                      serial.b_hat.size() * sizeof(double)) == 0);
}

TEST_CASE("kkt_check certifies converged fits and flags perturbations") {
    Rng rng(8);
    Dataset data;
    data.x = random_matrix(20, 50, rng);
    data.y = random_matrix(2, 50, rng);
    data.centered = true;

    LassoConfig cfg;
    cfg.lambda1 = 3.0;
    cfg.tol = 1e-10;
    LassoFit fit = fit_all(data, cfg);
    REQUIRE(fit.converged[0]);
    REQUIRE(fit.converged[1]);

    double scale = 1.0;
    for (std::size_t k = 0; k < 2; ++k) {
        std::vector<double> y_row(data.y.row(k), data.y.row(k) + 50);
        scale = std::max(scale, full_shrinkage_lambda(data.x, y_row) / 2.0);
    }
    const std::vector<double> clean = kkt_check(fit, data);
    for (double v : clean) CHECK(v <= 1e-6 * scale);

    // beta = 0 with lambda above the threshold has zero violation.
    LassoFit zero_fit;
    zero_fit.b_hat = Matrix(2, 20);
    zero_fit.lambda1 = 2.0 * scale * 1.01;
    const std::vector<double> at_zero = kkt_check(zero_fit, data);
    CHECK(at_zero[0] == 0.0);
    CHECK(at_zero[1] == 0.0);

    // Perturbing a nonzero coefficient strictly increases the violation.
    std::size_t row = fit.supports[0].empty() ? 1 : 0;
    REQUIRE(!fit.supports[row].empty());
    fit.b_hat(row, fit.supports[row][0]) += 0.1;
    const std::vector<double> perturbed = kkt_check(fit, data);
    CHECK(perturbed[row] > clean[row]);
}

TEST_CASE("solution is optimal against the other lambda's solution") {
    Rng rng(9);
    Dataset data;
    data.x = random_matrix(15, 40, rng);
    data.y = random_matrix(1, 40, rng);
    data.centered = true;
    std::vector<double> y_row(data.y.row(0), data.y.row(0) + 40);

    LassoConfig small, large;
    small.lambda1 = 0.5;
    large.lambda1 = 5.0;
    small.tol = large.tol = 1e-10;
    const LassoRowResult rs = fit_row(data.x, y_row, small);
    const LassoRowResult rl = fit_row(data.x, y_row, large);

    const double own = objective(data.x, y_row, rl.beta, large.lambda1);
    const double other = objective(data.x, y_row, rs.beta, large.lambda1);
    CHECK(own <= other + 1e-8 * std::max(1.0, other));
}

TEST_CASE("scaling covariance: (c*y, c*lambda) scales the solution by c") {
    Rng rng(10);
    const Matrix x = random_matrix(12, 30, rng);
    std::vector<double> y(30);
    for (double& v : y) v = rng.normal();

    LassoConfig cfg;
    cfg.lambda1 = 1.2;
    cfg.tol = 1e-11;
    const LassoRowResult base = fit_row(x, y, cfg);

    const double c = 3.7;
    std::vector<double> cy = y;
    for (double& v : cy) v *= c;
    LassoConfig scaled = cfg;
    scaled.lambda1 = cfg.lambda1 * c;
    const LassoRowResult r = fit_row(x, cy, scaled);

    for (std::size_t j = 0; j < 12; ++j) {
        CHECK(std::fabs(r.beta[j] - c * base.beta[j]) <=
              1e-8 * std::max(1.0, std::fabs(c * base.beta[j])));
    }
}

TEST_CASE("objective diagnostic matches a fresh recomputation") {
    Rng rng(11);
    Dataset data;
    data.x = random_matrix(10, 30, rng);
    data.y = random_matrix(2, 30, rng);
    data.centered = true;

    LassoConfig cfg;
    cfg.lambda1 = 0.8;
    const LassoFit fit = fit_all(data, cfg);
    for (std::size_t k = 0; k < 2; ++k) {
        std::vector<double> y_row(data.y.row(k), data.y.row(k) + 30);
        std::vector<double> beta(fit.b_hat.row(k), fit.b_hat.row(k) + 10);
        const double fresh = objective(data.x, y_row, beta, cfg.lambda1);
        CHECK(std::fabs(fit.objective[k] - fresh) <= 1e-8 * std::max(1.0, fresh));
    }
}

TEST_CASE("config validation") {
    LassoConfig cfg;
    cfg.lambda1 = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValueError);
    cfg.lambda1 = 0.0;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValueError);
    cfg.tol = 1e-8;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), ValueError);
}
