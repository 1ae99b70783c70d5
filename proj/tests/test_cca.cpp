#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

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

Matrix random_psd(std::size_t n, Rng& rng, double ridge) {
    const Matrix g = random_matrix(n, n, rng);
    Matrix s = gram(g, 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) s(i, i) += ridge;
    return s;
}

}  // namespace

TEST_CASE("assemble_gamma with zero coefficients yields a zero m") {
    Rng rng(1);
    Dataset data = random_dataset(5, 3, 20, rng);
    data = center(data);
    LassoFit fit;
    fit.b_hat = Matrix(3, 5);
    const GammaPencil pencil = assemble_gamma(fit, data);
    for (double v : pencil.m.data()) CHECK(v == 0.0);
    CHECK(pencil.s.rows() == 3);
}

TEST_CASE("assemble_gamma scalar reduction for d=1") {
    Rng rng(2);
    Dataset data = random_dataset(4, 1, 15, rng);
    data = center(data);
    LassoFit fit;
    fit.b_hat = Matrix(1, 4);
    for (std::size_t j = 0; j < 4; ++j) fit.b_hat(0, j) = rng.normal();

    const GammaPencil pencil = assemble_gamma(fit, data);
    const Matrix bx = matmul(fit.b_hat, data.x);
    double m_expect = 0.0, s_expect = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
        m_expect += bx(0, i) * bx(0, i);
        s_expect += data.y(0, i) * data.y(0, i);
    }
    CHECK(pencil.m(0, 0) == doctest::Approx(m_expect / 15.0));
    CHECK(pencil.s(0, 0) == doctest::Approx(s_expect / 15.0));
}

TEST_CASE("pencil eigenvalues match the explicit 2x2 inverse") {
    Rng rng(3);
    const Matrix m = random_psd(2, rng, 0.05);
    const Matrix s = random_psd(2, rng, 0.5);

    // Characteristic polynomial of s^-1 m.
    const Matrix t = solve_spd(s, m);
    const double tr = t(0, 0) + t(1, 1);
    const double det = t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0);
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const double hi = tr / 2.0 + disc;
    const double lo = tr / 2.0 - disc;

    const PencilPairs pairs = pencil_eigenpairs(m, s, 2);
    CHECK(std::fabs(pairs.values[0] - hi) <= 1e-9 * std::max(1.0, hi));
    CHECK(std::fabs(pairs.values[1] - lo) <= 1e-9 * std::max(1.0, hi));
}

TEST_CASE("pencil residual and s-orthogonality on random inputs") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(rng.below(7));
        const Matrix m = random_psd(d, rng, 0.0);
        const Matrix s = random_psd(d, rng, 0.3);
        const PencilPairs pairs = pencil_eigenpairs(m, s, d);

        const SymEigen sm = sym_eigen(m);
        const SymEigen ss = sym_eigen(s);
        const double scale = std::fabs(sm.values[0]) + std::fabs(ss.values[0]);

        for (std::size_t k = 0; k < d; ++k) {
            std::vector<double> ak(d);
            for (std::size_t i = 0; i < d; ++i) ak[i] = pairs.vectors(i, k);
            const std::vector<double> ma = matvec(m, ak);
            const std::vector<double> sa = matvec(s, ak);
            double res = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double r = ma[i] - pairs.values[k] * sa[i];
                res += r * r;
            }
            CHECK(std::sqrt(res) <= 1e-9 * scale);

            for (std::size_t l = k + 1; l < d; ++l) {
                double cross = 0.0;
                for (std::size_t i = 0; i < d; ++i) cross += pairs.vectors(i, l) * sa[i];
                CHECK(std::fabs(cross) <= 1e-9 * std::max(1.0, ss.values[0]));
            }
        }
    }
}

TEST_CASE("solve_pairs flags every pair degenerate when coefficients vanish") {
    Rng rng(5);
    Dataset data = random_dataset(6, 3, 25, rng);
    data = center(data);
    LassoFit fit;
    fit.b_hat = Matrix(3, 6);
    const GammaPencil pencil = assemble_gamma(fit, data);
    const CanonicalModel model = solve_pairs(pencil, 3, fit, data);
    CHECK(model.degenerate_pairs.size() == 3);
    for (double v : model.eigenvalues) CHECK(v == 0.0);
    for (double c : model.train_correlations) CHECK(c == 0.0);
}

TEST_CASE("diagonal pencil returns coordinate vectors") {
    Rng rng(6);
    Dataset data = random_dataset(2, 2, 10, rng);
    data = center(data);
    LassoFit fit;
    fit.b_hat = Matrix::identity(2);
    GammaPencil pencil;
    pencil.m = Matrix({{0.8, 0.0}, {0.0, 0.2}});
    pencil.s = Matrix::identity(2);
    const CanonicalModel model = solve_pairs(pencil, 2, fit, data);
    CHECK(model.eigenvalues[0] == doctest::Approx(0.8));
    CHECK(model.eigenvalues[1] == doctest::Approx(0.2));
    CHECK(model.a(0, 0) == doctest::Approx(1.0));
    CHECK(model.a(1, 0) == doctest::Approx(0.0));
    CHECK(model.a(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("solve_pairs reports a singular y Gram clearly") {
    Dataset data;
    data.x = Matrix(2, 4);
    data.y = Matrix(3, 4);  // rank deficient: only 4 samples but a constant row
    for (std::size_t i = 0; i < 4; ++i) {
        data.x(0, i) = static_cast<double>(i);
        data.x(1, i) = static_cast<double>(i % 2);
        data.y(0, i) = static_cast<double>(i);
        data.y(1, i) = 2.0 * static_cast<double>(i);  // linearly dependent rows
        data.y(2, i) = static_cast<double>(i % 2);
    }
    data = center(data);
    LassoFit fit;
    fit.b_hat = Matrix(3, 2, 0.5);
    const GammaPencil pencil = assemble_gamma(fit, data);
    CHECK_THROWS_AS(solve_pairs(pencil, 3, fit, data), NumericError);
}

TEST_CASE("fit_ecca uses exactly one eigensolve for K = d") {
    Rng rng(7);
    const Dataset data = random_dataset(10, 4, 40, rng);
    LassoConfig cfg;
    cfg.lambda1 = 0.5;
    const std::uint64_t before = sym_eigen_call_count();
    const CanonicalModel model = fit_ecca(data, cfg, 4);
    const std::uint64_t after = sym_eigen_call_count();
    CHECK(after - before == 1);
    CHECK(model.k_pairs == 4);
    CHECK(model.a.cols() == 4);
    CHECK(model.b.cols() == 4);
}

TEST_CASE("fit_ecca is invariant to sample order within 1e-12") {
    Rng rng(8);
    const std::size_t n = 30;
    const Dataset data = random_dataset(8, 3, n, rng);

    std::vector<std::size_t> perm = Rng(99).permutation(n);
    const Dataset shuffled = select_columns(data, perm);

    LassoConfig cfg;
    cfg.lambda1 = 0.3;
    cfg.tol = 1e-11;
    const CanonicalModel m1 = fit_ecca(data, cfg, 2);
    const CanonicalModel m2 = fit_ecca(shuffled, cfg, 2);
    for (std::size_t i = 0; i < m1.a.size(); ++i) {
        CHECK(std::fabs(m1.a.data()[i] - m2.a.data()[i]) <= 1e-12);
    }
    for (std::size_t i = 0; i < m1.b.size(); ++i) {
        CHECK(std::fabs(m1.b.data()[i] - m2.b.data()[i]) <= 1e-12);
    }
}

TEST_CASE("fit_ecca validates dimensions") {
    Rng rng(9);
    const Dataset tall = random_dataset(4, 5, 5, rng);  // d >= n
    LassoConfig cfg;
    CHECK_THROWS_AS(fit_ecca(tall, cfg, 1), ValueError);

    const Dataset ok = random_dataset(4, 2, 10, rng);
    CHECK_THROWS_AS(fit_ecca(ok, cfg, 0), ValueError);
    CHECK_THROWS_AS(fit_ecca(ok, cfg, 3), ValueError);
}

TEST_CASE("unit normalization and sign convention on non-degenerate pairs") {
    Rng rng(10);
    const Dataset data = random_dataset(12, 4, 50, rng);
    LassoConfig cfg;
    cfg.lambda1 = 0.2;
    const CanonicalModel model = fit_ecca(data, cfg, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        double na = 0.0;
        for (std::size_t i = 0; i < 4; ++i) na += model.a(i, k) * model.a(i, k);
        CHECK(std::fabs(std::sqrt(na) - 1.0) <= 1e-10);
        if (!model.degenerate_pairs.count(k)) {
            double nb = 0.0;
            for (std::size_t j = 0; j < 12; ++j) nb += model.b(j, k) * model.b(j, k);
            CHECK(std::fabs(std::sqrt(nb) - 1.0) <= 1e-10);
        }
        for (std::size_t i = 0; i < 4; ++i) {
            const double e = model.a(i, k);
            if (std::fabs(e) > 1e-12) {
                CHECK(e > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("projecting the training data reproduces the training correlations") {
    Rng rng(11);
    Dataset data = random_dataset(6, 3, 30, rng);
    data = center(data);
    LassoConfig cfg;
    cfg.lambda1 = 0.1;
    const CanonicalModel model = fit_ecca(data, cfg, 3);
    const Projection proj = project(model, data);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::fabs(proj.correlations[k] - model.train_correlations[k]) <= 1e-12);
    }
}

TEST_CASE("identical first rows project to correlation one") {
    Rng rng(12);
    const std::size_t n = 20;
    Dataset data;
    data.x = random_matrix(3, n, rng);
    data.y = random_matrix(2, n, rng);
    for (std::size_t i = 0; i < n; ++i) data.y(0, i) = data.x(0, i);
    data = center(data);

    CanonicalModel model;
    model.k_pairs = 1;
    model.a = Matrix(2, 1);
    model.a(0, 0) = 1.0;
    model.b = Matrix(3, 1);
    model.b(0, 0) = 1.0;
    const Projection proj = project(model, data);
    CHECK(proj.correlations[0] == doctest::Approx(1.0));
}

TEST_CASE("zero-variance projection reports correlation 0 with a flag") {
    Dataset data;
    data.x = Matrix(2, 5);
    data.y = Matrix(2, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        data.x(0, i) = static_cast<double>(i);
        data.y(0, i) = static_cast<double>(i) * 0.5;
    }
    data = center(data);

    CanonicalModel model;
    model.k_pairs = 1;
    model.a = Matrix(2, 1);
    model.a(1, 0) = 1.0;  // picks the all-zero y row
    model.b = Matrix(2, 1);
    model.b(0, 0) = 1.0;
    const Projection proj = project(model, data);
    CHECK(proj.correlations[0] == 0.0);
    CHECK(proj.zero_variance[0]);
}

TEST_CASE("scaling y leaves the a-side vectors unchanged") {
    Rng rng(13);
    const Dataset data = random_dataset(8, 3, 40, rng);
    Dataset scaled = data;
    for (double& v : scaled.y.data()) v *= 4.2;

    LassoConfig cfg;
    cfg.lambda1 = 0.0;
    cfg.tol = 1e-12;
    cfg.max_iters = 200000;
    const CanonicalModel m1 = fit_ecca(data, cfg, 3);
    const CanonicalModel m2 = fit_ecca(scaled, cfg, 3);
    for (std::size_t i = 0; i < m1.a.size(); ++i) {
        CHECK(std::fabs(m1.a.data()[i] - m2.a.data()[i]) <= 1e-10);
    }
}

TEST_CASE("eigenvalues lie in [0, 1] for the unpenalized low-dimensional fit") {
    Rng rng(14);
    const Dataset data = random_dataset(5, 3, 60, rng);
    LassoConfig cfg;
    cfg.lambda1 = 0.0;
    cfg.tol = 1e-12;
    cfg.max_iters = 200000;
    const CanonicalModel model = fit_ecca(data, cfg, 3);
    for (double v : model.eigenvalues) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-10);
    }
}

TEST_CASE("b support is contained in the union of coefficient supports") {
    Rng rng(15);
    const Dataset data = random_dataset(15, 3, 50, rng);
    LassoConfig cfg;
    cfg.lambda1 = 8.0;
    const Dataset centered = center(data);
    const LassoFit fit = fit_all(centered, cfg);
    const GammaPencil pencil = assemble_gamma(fit, centered);
    const CanonicalModel model = solve_pairs(pencil, 3, fit, centered);

    std::vector<bool> in_union(15, false);
    for (const auto& sup : fit.supports) {
        for (std::size_t j : sup) in_union[j] = true;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t j = 0; j < 15; ++j) {
            if (model.b(j, k) != 0.0) CHECK(in_union[j]);
        }
    }
}
