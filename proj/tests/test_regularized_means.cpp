#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hdinfer/lp.hpp"
#include "hdinfer/regularized_means.hpp"

using namespace hdinfer;
namespace rm = hdinfer::regularized_means;

namespace {

mam::MamProblem unit_scale_problem(std::size_t n, std::size_t p) {
    // E_n[Z^2] = 1 in every column: alternate +1/-1 down each column.
    mam::MamProblem prob;
    prob.theta_hat.assign(p, 0.0);
    prob.influence = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            prob.influence(i, j) = (i % 2 == 0) ? 1.0 : -1.0;
    return prob;
}

// The one-dimensional program min |t| subject to |hat - t| <= lambda, written
// as min tp + tm with t = tp - tm, tp, tm >= 0.
double scalar_l1_program(double hat, double lambda) {
    lp::LinearProgram prog;
    prog.objective = {1.0, 1.0};
    prog.constraints = Matrix(2, 2);
    prog.constraints(0, 0) = 1.0;
    prog.constraints(0, 1) = -1.0;
    prog.constraints(1, 0) = 1.0;
    prog.constraints(1, 1) = -1.0;
    prog.rhs = {hat + lambda, hat - lambda};
    prog.senses = {lp::Sense::LessEqual, lp::Sense::GreaterEqual};
    prog.lower_bounds = {0.0, 0.0};
    prog.upper_bounds = {std::nullopt, std::nullopt};
    const auto sol = lp::solve_lp(prog);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    return sol.x[0] - sol.x[1];
}

}  // namespace

TEST_CASE("soft threshold closed form") {
    auto est = rm::soft_threshold({2.5, -0.5, 0.0, -3.0}, 1.0);
    CHECK(est.theta_tilde[0] == doctest::Approx(1.5));
    CHECK(est.theta_tilde[1] == doctest::Approx(0.0));
    CHECK(est.theta_tilde[2] == doctest::Approx(0.0));
    CHECK(est.theta_tilde[3] == doctest::Approx(-2.0));
    CHECK(est.support == std::set<std::size_t>{0, 3});
    CHECK(est.lambda_used == doctest::Approx(1.0));

    auto noreg = rm::soft_threshold({0.3, -1.7}, 0.0);
    CHECK(noreg.theta_tilde[0] == doctest::Approx(0.3));
    CHECK(noreg.theta_tilde[1] == doctest::Approx(-1.7));

    CHECK_THROWS_AS(rm::soft_threshold({1.0}, -0.1), std::invalid_argument);
}

TEST_CASE("selection threshold keeps large coordinates unshrunk") {
    auto est = rm::selection_threshold({2.5, 0.5, -1.0}, 1.0);
    CHECK(est.theta_tilde[0] == doctest::Approx(2.5));
    CHECK(est.theta_tilde[1] == doctest::Approx(0.0));
    // Strict inequality: |-1.0| > 1.0 is false.
    CHECK(est.theta_tilde[2] == doctest::Approx(0.0));
    CHECK(est.support == std::set<std::size_t>{0});

    auto all = rm::selection_threshold({0.1, -0.2, 0.0}, 0.0);
    CHECK(all.support == std::set<std::size_t>{0, 1});

    CHECK_THROWS_AS(rm::selection_threshold({1.0}, -1e-9), std::invalid_argument);
}

TEST_CASE("shrinkage invariants hold for random inputs") {
    Rng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        Vector hat(8);
        for (double& v : hat) v = 3.0 * rng.normal();
        const double lambda = rng.uniform() * 2.0;
        const auto est = rm::soft_threshold(hat, lambda);
        for (std::size_t j = 0; j < hat.size(); ++j) {
            CHECK(std::fabs(est.theta_tilde[j]) <= std::fabs(hat[j]) + 1e-15);
            CHECK(std::fabs(est.theta_tilde[j] - hat[j]) <= lambda + 1e-15);
        }
    }
}

TEST_CASE("lambda selection rules") {
    // Ideal noise oracle at n=100, p=1000, alpha=0.1.
    CHECK(rm::select_lambda_ideal_noise(100, 1000, 0.1) ==
          doctest::Approx(0.3890592).epsilon(1e-6));
    // Scale homogeneity in sigma.
    CHECK(rm::select_lambda_ideal_noise(100, 1000, 0.1, 2.0) ==
          doctest::Approx(2.0 * rm::select_lambda_ideal_noise(100, 1000, 0.1)));
    CHECK_THROWS_AS(rm::select_lambda_ideal_noise(0, 10, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(rm::select_lambda_ideal_noise(10, 10, 0.1, 0.0),
                    std::invalid_argument);

    // Self-normalized rule with unit empirical second moments equals the
    // ideal-noise value.
    const auto prob = unit_scale_problem(100, 1000);
    CHECK(rm::select_lambda_self_normalized(prob, 0.1) ==
          doctest::Approx(rm::select_lambda_ideal_noise(100, 1000, 0.1)).epsilon(1e-12));

    // Bootstrap rule with identically zero influence returns zero.
    mam::MamProblem zero;
    zero.theta_hat.assign(4, 0.0);
    zero.influence = Matrix(6, 4, 0.0);
    bootstrap::BootstrapConfig cfg{bootstrap::Scheme::Gaussian, 200, 11};
    CHECK(rm::select_lambda_bootstrap(zero, 0.1, cfg) == doctest::Approx(0.0));

    // Bootstrap rule scales like 1/sqrt(n) through the final division.
    const auto prob2 = unit_scale_problem(64, 5);
    const double lam = rm::select_lambda_bootstrap(prob2, 0.1, cfg);
    CHECK(lam > 0.0);
    CHECK(lam < 1.0);
}

TEST_CASE("theoretical error bounds") {
    CHECK(rm::theoretical_error_bound(rm::SparsityModel::exactly_sparse(5), 0.1, 2.0) ==
          doctest::Approx(0.4472136).epsilon(1e-6));
    CHECK(rm::theoretical_error_bound(rm::SparsityModel::bounded_l1(10.0), 0.1, 1.0) ==
          doctest::Approx(20.0).epsilon(1e-12));
    CHECK(rm::theoretical_error_bound(
              rm::SparsityModel::approximately_sparse(10.0, 1.5), 0.1, 2.0) ==
          doctest::Approx(2.81425).epsilon(1e-5));

    // Domain checks.
    CHECK_THROWS_AS(
        rm::theoretical_error_bound(rm::SparsityModel::exactly_sparse(5), 0.1, 0.5),
        std::invalid_argument);
    CHECK_THROWS_AS(rm::theoretical_error_bound(
                        rm::SparsityModel::approximately_sparse(10.0, 1.5), 0.1, 0.6),
                    std::invalid_argument);
    CHECK_THROWS_AS(rm::theoretical_error_bound(
                        rm::SparsityModel::approximately_sparse(10.0, 1.5), 15.0, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        rm::theoretical_error_bound(rm::SparsityModel::exactly_sparse(5), -0.1, 2.0),
        std::invalid_argument);

    // Bounds shrink with lambda for ES and DM.
    CHECK(rm::theoretical_error_bound(rm::SparsityModel::exactly_sparse(5), 0.05, 2.0) <
          rm::theoretical_error_bound(rm::SparsityModel::exactly_sparse(5), 0.1, 2.0));
    CHECK(rm::theoretical_error_bound(rm::SparsityModel::bounded_l1(10.0), 0.05, 2.0) <
          rm::theoretical_error_bound(rm::SparsityModel::bounded_l1(10.0), 0.1, 2.0));
}

TEST_CASE("sparse vector generators") {
    Rng rng(505);
    const auto es = rm::generate_sparse_vector(rm::SparsityModel::exactly_sparse(8), 10, rng);
    CHECK(es[0] == doctest::Approx(50.0));
    CHECK(es[7] == doctest::Approx(2.20971).epsilon(1e-5));
    CHECK(es[8] == doctest::Approx(0.0));
    CHECK(es[9] == doctest::Approx(0.0));

    const auto as =
        rm::generate_sparse_vector(rm::SparsityModel::approximately_sparse(10.0, 1.5), 6, rng);
    CHECK(as[3] == doctest::Approx(1.25));
    CHECK(as[0] == doctest::Approx(10.0));
    CHECK(std::is_sorted(as.rbegin(), as.rend()));

    for (int trial = 0; trial < 20; ++trial) {
        const auto dm =
            rm::generate_sparse_vector(rm::SparsityModel::bounded_l1(10.0), 200, rng);
        const double l1 = std::accumulate(
            dm.begin(), dm.end(), 0.0, [](double acc, double v) { return acc + std::fabs(v); });
        CHECK(l1 <= 10.0 + 1e-12);
        CHECK(*std::min_element(dm.begin(), dm.end()) > 0.0);
        CHECK(std::is_sorted(dm.begin(), dm.end()));
    }
}

TEST_CASE("soft threshold matches the coordinatewise l1 program") {
    Rng rng(606);
    for (int trial = 0; trial < 1000; ++trial) {
        const double hat = 4.0 * rng.normal();
        const double lambda = 2.0 * rng.uniform();
        const auto est = rm::soft_threshold({hat}, lambda);
        CHECK(std::fabs(est.theta_tilde[0] - scalar_l1_program(hat, lambda)) <= 1e-8);
    }
}

TEST_CASE("conditional dominance within the lambda box") {
    Rng rng(707);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = 6;
        Vector theta0(p);
        for (double& v : theta0) v = 2.0 * rng.normal();
        const double lambda = 0.5 + rng.uniform();
        Vector hat(p);
        for (std::size_t j = 0; j < p; ++j)
            hat[j] = theta0[j] + lambda * (2.0 * rng.uniform() - 1.0);
        const auto est = rm::soft_threshold(hat, lambda);
        for (std::size_t j = 0; j < p; ++j) {
            CHECK(std::fabs(est.theta_tilde[j]) <= std::fabs(theta0[j]) + 1e-12);
            CHECK(std::fabs(est.theta_tilde[j] - theta0[j]) <= 2.0 * lambda + 1e-12);
        }
    }
}
