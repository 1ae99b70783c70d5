#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecca/baselines.hpp"
#include "ecca/cca.hpp"
#include "ecca/errors.hpp"
#include "ecca/linalg.hpp"
#include "ecca/rng.hpp"

using namespace ecca;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (double& e : m.data()) e = rng.normal();
    return m;
}

Dataset random_dataset(std::size_t p, std::size_t d, std::size_t n, Rng& rng) {
    Dataset data;
    data.x = random_matrix(p, n, rng);
    data.y = random_matrix(d, n, rng);
    return data;
}

// Direct search for the best first canonical correlation: random unit
// a-candidates plus coordinate refinement; given a, the best b maximizes
// the sample correlation and solves the x-side regression directly.
double brute_force_first_correlation(const Dataset& raw, std::size_t restarts = 4000) {
    const Dataset data = center(raw);
    const std::size_t d = data.y_dim();
    const double inv_n = 1.0 / static_cast<double>(data.n_samples());
    const Matrix sxx = gram(data.x, inv_n);
    Matrix sxy = matmul(data.x, transpose(data.y));
    for (double& e : sxy.data()) e *= inv_n;

    Rng rng(424242);
    auto corr_for = [&](const std::vector<double>& a) {
        Matrix rhs(sxy.rows(), 1);
        for (std::size_t j = 0; j < sxy.rows(); ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < d; ++i) v += sxy(j, i) * a[i];
            rhs(j, 0) = v;
        }
        const Matrix b = solve_spd(sxx, rhs);
        const std::vector<double> u = matvec_transposed(data.y, a);
        std::vector<double> bv(b.rows());
        for (std::size_t j = 0; j < b.rows(); ++j) bv[j] = b(j, 0);
        const std::vector<double> v = matvec_transposed(data.x, bv);
        return std::fabs(pearson(u.data(), v.data(), u.size()));
    };

    double best = 0.0;
    std::vector<double> best_a(d, 0.0);
    for (std::size_t t = 0; t < restarts; ++t) {
        std::vector<double> a(d);
        double nrm = 0.0;
        for (double& e : a) {
            e = rng.normal();
            nrm += e * e;
        }
        nrm = std::sqrt(nrm);
        for (double& e : a) e /= nrm;
        const double c = corr_for(a);
        if (c > best) {
            best = c;
            best_a = a;
        }
    }
    // Coordinate refinement around the best candidate.
    double step = 0.1;
    while (step > 1e-4) {
        bool improved = false;
        for (std::size_t i = 0; i < d; ++i) {
            for (double delta : {step, -step}) {
                std::vector<double> a = best_a;
                a[i] += delta;
                double nrm = 0.0;
                for (double e : a) nrm += e * e;
                nrm = std::sqrt(nrm);
                for (double& e : a) e /= nrm;
                const double c = corr_for(a);
                if (c > best) {
                    best = c;
                    best_a = a;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace

TEST_CASE("identical views give the perfect first pair") {
    Rng rng(1);
    const Matrix shared = random_matrix(3, 40, rng);
    Dataset data;
    data.x = shared;
    data.y = shared;
    const CanonicalModel model = classical_cca(data, 1);
    CHECK(model.train_correlations[0] == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(model.a(i, 0) == doctest::Approx(model.b(i, 0)));
    }
}

TEST_CASE("exactly orthogonal views give zero eigenvalues") {
    // Chosen so the sample cross-covariance is identically zero.
    Dataset data;
    data.x = Matrix({{1.0, -1.0, 1.0, -1.0}});
    data.y = Matrix({{1.0, 1.0, -1.0, -1.0}});
    const CanonicalModel model = classical_cca(data, 1);
    CHECK(std::fabs(model.eigenvalues[0]) <= 1e-12);
}

TEST_CASE("classical first pair matches the brute-force maximizer") {
    Rng rng(2);
    Dataset data = random_dataset(4, 3, 50, rng);
    // Plant mild dependence so the maximum is away from zero.
    for (std::size_t i = 0; i < 50; ++i) {
        data.y(0, i) += 0.8 * data.x(1, i);
    }
    const CanonicalModel model = classical_cca(data, 1);
    const double oracle = brute_force_first_correlation(data);
    CHECK(std::fabs(std::fabs(model.train_correlations[0]) - oracle) <= 1e-3);
}

TEST_CASE("classical requires p < n and d < n") {
    Rng rng(3);
    const Dataset wide = random_dataset(30, 2, 20, rng);
    CHECK_THROWS_AS(classical_cca(wide, 1), ValueError);
}

TEST_CASE("classical eigenvalues are squared correlations in [0, 1], nonincreasing") {
    Rng rng(4);
    const Dataset data = random_dataset(5, 4, 80, rng);
    const CanonicalModel model = classical_cca(data, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(model.eigenvalues[k] >= -1e-10);
        CHECK(model.eigenvalues[k] <= 1.0 + 1e-10);
        if (k > 0) CHECK(model.eigenvalues[k] <= model.eigenvalues[k - 1] + 1e-12);
        CHECK(std::fabs(std::fabs(model.train_correlations[k]) -
                        std::sqrt(std::max(0.0, model.eigenvalues[k]))) <= 1e-8);
    }
}

TEST_CASE("classical first correlation dominates every single row pair") {
    Rng rng(5);
    Dataset data = random_dataset(5, 3, 60, rng);
    data.y(1, 5) += 2.0;  // arbitrary asymmetry
    const Dataset centered = center(data);
    const CanonicalModel model = classical_cca(data, 1);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const double c =
                pearson(centered.y.row(i), centered.x.row(j), centered.n_samples());
            CHECK(std::fabs(model.train_correlations[0]) >= std::fabs(c) - 1e-9);
        }
    }
}

TEST_CASE("nugget with mu = 0 reproduces classical exactly") {
    Rng rng(6);
    const Dataset data = random_dataset(6, 3, 40, rng);
    const CanonicalModel classical = classical_cca(data, 2);
    const CanonicalModel nugget = nugget_cca(data, NuggetConfig{0.0, 0.0}, 2);
    for (std::size_t i = 0; i < classical.a.size(); ++i) {
        CHECK(classical.a.data()[i] == nugget.a.data()[i]);
    }
    for (std::size_t i = 0; i < classical.b.size(); ++i) {
        CHECK(classical.b.data()[i] == nugget.b.data()[i]);
    }
}

TEST_CASE("huge mu_x drives b toward the cross-covariance direction") {
    Rng rng(7);
    const Dataset data = random_dataset(5, 2, 30, rng);
    const CanonicalModel model = nugget_cca(data, NuggetConfig{1e8, 0.0}, 1);

    const Dataset centered = center(data);
    const double inv_n = 1.0 / 30.0;
    Matrix sxy = matmul(centered.x, transpose(centered.y));
    for (double& e : sxy.data()) e *= inv_n;
    std::vector<double> a(2);
    for (std::size_t i = 0; i < 2; ++i) a[i] = model.a(i, 0);
    std::vector<double> direction = matvec(sxy, a);
    const double nrm = norm2(direction);
    for (double& e : direction) e /= nrm;
    fix_sign(direction);

    double cosine = 0.0;
    for (std::size_t j = 0; j < 5; ++j) cosine += direction[j] * model.b(j, 0);
    CHECK(std::acos(std::min(1.0, std::fabs(cosine))) <= 1e-3);
}

TEST_CASE("nugget handles p much larger than n") {
    Rng rng(8);
    const Dataset data = random_dataset(1000, 3, 50, rng);
    const CanonicalModel model = nugget_cca(data, NuggetConfig{0.5, 0.1}, 2);
    for (double v : model.eigenvalues) CHECK(std::isfinite(v));
    for (double v : model.train_correlations) CHECK(std::isfinite(v));
}

TEST_CASE("nugget is continuous in small mu") {
    Rng rng(9);
    const Dataset data = random_dataset(8, 3, 40, rng);
    const CanonicalModel a = nugget_cca(data, NuggetConfig{0.02, 0.0}, 1);
    const CanonicalModel b = nugget_cca(data, NuggetConfig{0.01, 0.0}, 1);
    CHECK(std::fabs(a.train_correlations[0] - b.train_correlations[0]) < 0.2);
}

TEST_CASE("nugget config validation") {
    NuggetConfig bad;
    bad.mu_x = -0.1;
    CHECK_THROWS_AS(bad.validate(), ValueError);
}

TEST_CASE("pca_reduce on a rank-one matrix recovers the active axis") {
    Matrix y(3, 6);
    for (std::size_t i = 0; i < 6; ++i) y(1, i) = static_cast<double>(i) - 2.5;
    const PcaResult result = pca_reduce(y, 1);
    CHECK(std::fabs(result.components(0, 1)) == doctest::Approx(1.0));
    CHECK(std::fabs(result.components(0, 0)) <= 1e-12);
    CHECK(std::fabs(result.components(0, 2)) <= 1e-12);
}

TEST_CASE("full-rank pca keeps all variance and reconstructs the projection") {
    Rng rng(10);
    const Matrix y = random_matrix(4, 30, rng);
    const PcaResult result = pca_reduce(y, 4);

    double total_var = 0.0;
    Matrix centered = y;
    for (std::size_t i = 0; i < 4; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < 30; ++j) mean += y(i, j);
        mean /= 30.0;
        for (std::size_t j = 0; j < 30; ++j) {
            centered(i, j) -= mean;
            total_var += centered(i, j) * centered(i, j) / 30.0;
        }
    }
    double kept = 0.0;
    for (double v : result.variances) kept += v;
    CHECK(kept == doctest::Approx(total_var));

    // U^T U acts as the identity on the centered data.
    const Matrix rebuilt = matmul(transpose(result.components), result.reduced);
    for (std::size_t i = 0; i < centered.size(); ++i) {
        CHECK(std::fabs(rebuilt.data()[i] - centered.data()[i]) <= 1e-10);
    }
}

TEST_CASE("pca component variances equal the Gram eigenvalues") {
    Rng rng(11);
    const Matrix y = random_matrix(10, 200, rng);
    const PcaResult result = pca_reduce(y, 10);

    Matrix centered = y;
    for (std::size_t i = 0; i < 10; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < 200; ++j) mean += y(i, j);
        mean /= 200.0;
        for (std::size_t j = 0; j < 200; ++j) centered(i, j) -= mean;
    }
    const SymEigen eig = sym_eigen(gram(centered, 1.0 / 200.0));
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(std::fabs(result.variances[k] - eig.values[k]) <= 1e-10);
    }
}

TEST_CASE("default component count is half of d rounded up") {
    CHECK(default_pca_components(1) == 1);
    CHECK(default_pca_components(4) == 2);
    CHECK(default_pca_components(5) == 3);
    CHECK(default_pca_components(30) == 15);
}
