#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hdinfer/dgp.hpp"

using namespace hdinfer;
namespace d = hdinfer::dgp;

namespace {

double column_mean(const Matrix& M, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < M.rows; ++i) s += M(i, j);
    return s / static_cast<double>(M.rows);
}

double column_variance(const Matrix& M, std::size_t j) {
    const double mu = column_mean(M, j);
    double s = 0.0;
    for (std::size_t i = 0; i < M.rows; ++i) {
        const double v = M(i, j) - mu;
        s += v * v;
    }
    return s / static_cast<double>(M.rows);
}

}  // namespace

TEST_CASE("figure1 dgp: determinism, theta0, and moments") {
    const auto a = d::figure1_dgp(50, 8, 3, 99);
    const auto b = d::figure1_dgp(50, 8, 3, 99);
    CHECK(a.problem.theta_hat == b.problem.theta_hat);
    CHECK(a.problem.influence.data == b.problem.influence.data);
    for (double v : a.theta0) CHECK(v == 0.0);

    // theta_hat is the column mean of the influence values.
    for (std::size_t j = 0; j < 8; ++j)
        CHECK(a.problem.theta_hat[j] ==
              doctest::Approx(column_mean(a.problem.influence, j)).epsilon(1e-12));

    // The design is tied to design_seed only: new noise seed, same W means
    // the influence columns stay proportional to eps within each row.
    const auto c = d::figure1_dgp(50, 8, 7, 99);
    // Z_ij = W_ij eps_i: the ratio Z_ij / Z_ik = W_ij / W_ik is noise-free.
    for (std::size_t i = 0; i < 5; ++i) {
        const double r1 = a.problem.influence(i, 0) / a.problem.influence(i, 1);
        const double r2 = c.problem.influence(i, 0) / c.problem.influence(i, 1);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-10));
    }
    // Different design seed changes the ratios.
    const auto e = d::figure1_dgp(50, 8, 3, 100);
    CHECK(a.problem.influence.data != e.problem.influence.data);

    // Column variance approximately E[W^2] Var(t4) = (1/3) * 2 = 2/3.
    const auto big = d::figure1_dgp(100000, 3, 11, 5);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(column_variance(big.problem.influence, j) ==
              doctest::Approx(2.0 / 3.0).epsilon(0.1));
}

TEST_CASE("sparse linear dgp") {
    const auto model = regularized_means::SparsityModel::exactly_sparse(3, 5.0);

    // sigma = 0 gives exact y = W theta0.
    const auto exact =
        d::sparse_linear_dgp(30, 6, model, 0.0, d::DesignKind::IdentityCov, 0.0, 21);
    for (std::size_t i = 0; i < 30; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < 6; ++j) fit += exact.W(i, j) * exact.theta0[j];
        CHECK(exact.y[i] == doctest::Approx(fit).epsilon(1e-12));
    }

    // theta0 = 0 gives y = noise with variance sigma^2.
    const auto zero_model = regularized_means::SparsityModel::exactly_sparse(1, 0.0);
    const auto noise =
        d::sparse_linear_dgp(20000, 2, zero_model, 2.0, d::DesignKind::IdentityCov, 0.0, 22);
    double var = 0.0;
    for (double v : noise.y) var += v * v;
    var /= static_cast<double>(noise.y.size());
    CHECK(var == doctest::Approx(4.0).epsilon(0.05));

    // Toeplitz rho = 0.6: adjacent-column sample correlation near 0.6.
    const auto toe =
        d::sparse_linear_dgp(20000, 4, model, 1.0, d::DesignKind::Toeplitz, 0.6, 23);
    double c01 = 0.0, v0 = 0.0, v1 = 0.0;
    for (std::size_t i = 0; i < toe.W.rows; ++i) {
        c01 += toe.W(i, 0) * toe.W(i, 1);
        v0 += toe.W(i, 0) * toe.W(i, 0);
        v1 += toe.W(i, 1) * toe.W(i, 1);
    }
    CHECK(c01 / std::sqrt(v0 * v1) == doctest::Approx(0.6).epsilon(0.05));

    // Determinism.
    const auto r1 =
        d::sparse_linear_dgp(10, 4, model, 1.0, d::DesignKind::IdentityCov, 0.0, 5);
    const auto r2 =
        d::sparse_linear_dgp(10, 4, model, 1.0, d::DesignKind::IdentityCov, 0.0, 5);
    CHECK(r1.W.data == r2.W.data);
    CHECK(r1.y == r2.y);
}

TEST_CASE("homoskedastic iv dgp") {
    const std::size_t n = 20000, p = 3, m = 6, s = 2;
    const auto data = d::homoskedastic_iv_dgp(n, p, m, s, 1.0, 2.0, 77);
    REQUIRE(data.Z.rows == n);
    REQUIRE(data.Z.cols == m);
    REQUIRE(data.W.cols == p);

    // theta0 has s leading ones.
    CHECK(data.theta0[0] == doctest::Approx(1.0));
    CHECK(data.theta0[1] == doctest::Approx(1.0));
    CHECK(data.theta0[2] == doctest::Approx(0.0));

    // First stage: cov(Z_j, W_j) approx pi for matched instruments.
    for (std::size_t j = 0; j < p; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += data.Z(i, j) * data.W(i, j);
        c /= static_cast<double>(n);
        CHECK(c == doctest::Approx(2.0).epsilon(0.05));
    }

    // Residual eps = y - W theta0 uncorrelated with Z at 1/sqrt(n) scale.
    for (std::size_t j = 0; j < m; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double fit = 0.0;
            for (std::size_t k = 0; k < p; ++k) fit += data.W(i, k) * data.theta0[k];
            c += data.Z(i, j) * (data.y[i] - fit);
        }
        c /= static_cast<double>(n);
        CHECK(std::fabs(c) < 5.0 / std::sqrt(static_cast<double>(n)));
    }

    // sigma = 0: exact linear system.
    const auto det = d::homoskedastic_iv_dgp(40, p, m, s, 0.0, 1.0, 12);
    for (std::size_t i = 0; i < 40; ++i) {
        double fit = 0.0;
        for (std::size_t k = 0; k < p; ++k) fit += det.W(i, k) * det.theta0[k];
        CHECK(det.y[i] == doctest::Approx(fit).epsilon(1e-12));
    }
}

TEST_CASE("logistic dgp") {
    const auto zero_model = regularized_means::SparsityModel::exactly_sparse(1, 0.0);
    const auto data = d::logistic_dgp(40000, 3, zero_model, 42);
    // theta0 = 0: P(y=1) = 1/2.
    double mean = 0.0;
    for (double v : data.y) {
        CHECK((v == 0.0 || v == 1.0));
        mean += v;
    }
    mean /= static_cast<double>(data.y.size());
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));

    // Strong positive signal saturates P(y=1) toward 1.
    const auto strong = d::logistic_dgp(
        5000, 2, regularized_means::SparsityModel::exactly_sparse(2, 100.0), 43);
    double frac_match = 0.0;
    for (std::size_t i = 0; i < strong.W.rows; ++i) {
        double lin = 0.0;
        for (std::size_t j = 0; j < 2; ++j) lin += strong.W(i, j) * strong.theta0[j];
        if (std::fabs(lin) > 8.0)
            frac_match += (strong.y[i] == (lin > 0.0 ? 1.0 : 0.0)) ? 1.0 : 0.0;
    }
    CHECK(frac_match > 0.0);
}

TEST_CASE("rct outcomes dgp") {
    Vector effects{1.0, 0.0, -0.5};
    const auto data = d::rct_outcomes_dgp(60000, 3, 0.5, effects, 123);
    CHECK(data.theta0 == effects);
    CHECK(data.gamma == doctest::Approx(0.5));
    // Treatment indicator is binary with mean near gamma.
    double dbar = 0.0;
    for (double v : data.treated) {
        CHECK((v == 0.0 || v == 1.0));
        dbar += v;
    }
    dbar /= static_cast<double>(data.treated.size());
    CHECK(dbar == doctest::Approx(0.5).epsilon(0.02));
    // theta_hat estimates the effects within MC error.
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(data.problem.theta_hat[j] == doctest::Approx(effects[j]).scale(1.0).epsilon(0.05));
    // The influence column mean is theta_hat minus the plug-in
    // difference-in-means, which concentrates at theta0 -- so the column mean
    // sits near theta_hat - theta0 at the 1/sqrt(n) scale.
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::fabs(column_mean(data.problem.influence, j) -
                        (data.problem.theta_hat[j] - effects[j])) < 0.05);
}

TEST_CASE("means model dgp") {
    const std::size_t n = 400, p = 100, k = 5;
    const auto data = d::means_model_dgp(n, p, k, 1.0, 31);
    const double sep = 2.0 * std::sqrt(std::log(static_cast<double>(p))) /
                       std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < p; ++j)
        CHECK(data.theta0[j] == doctest::Approx(j < k ? sep : 0.0));
    // Influence columns are exactly centered: Z = X - theta_hat.
    for (std::size_t j = 0; j < p; ++j)
        CHECK(column_mean(data.problem.influence, j) == doctest::Approx(0.0).epsilon(1e-12));
    // Strength scales the separation linearly.
    const auto twice = d::means_model_dgp(n, p, k, 2.0, 31);
    CHECK(twice.theta0[0] == doctest::Approx(2.0 * sep));

    // Determinism.
    const auto again = d::means_model_dgp(n, p, k, 1.0, 31);
    CHECK(again.problem.theta_hat == data.problem.theta_hat);
}

TEST_CASE("distinct seeds decorrelate replications") {
    // The design is shared by construction, so compare the per-observation
    // noise: Z_i1 = W_i1 eps_i with independent eps across seeds should have
    // sample correlation near zero over the observations.
    const std::size_t n = 20000;
    const auto a = d::figure1_dgp(n, 1, 1001, 7);
    const auto b = d::figure1_dgp(n, 1, 1002, 7);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.problem.influence(i, 0);
        const double y = b.problem.influence(i, 0);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    CHECK(std::fabs(dot / std::sqrt(na * nb)) < 0.05);
}
