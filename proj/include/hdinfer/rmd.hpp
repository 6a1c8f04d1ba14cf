#pragma once

#include <functional>
#include <string>

#include "hdinfer/linalg.hpp"
#include "hdinfer/lp.hpp"

namespace hdinfer::rmd {

// Moment model g(theta): per-observation scores, their average, and the
// Jacobian of the average. Callbacks must be pure in theta.
struct ScoreModel {
    std::size_t m = 0;  // moment count
    std::size_t p = 0;  // parameter count
    std::function<Matrix(const Vector&)> scores;   // n x m matrix of g(X_i, theta)
    std::function<Vector(const Vector&)> g_hat;    // averaged moments, length m
    std::function<Matrix(const Vector&)> jacobian; // m x p matrix d g_hat / d theta'
};

// Linear moments: g_hat(theta) = G_hat theta + g0_hat.
struct LinearScore {
    Matrix G_hat;   // m x p
    Vector g0_hat;  // m
};

struct RmdConfig {
    double lambda = 0.0;
    std::size_t max_outer_iterations = 50;
    double tol = 1e-8;  // convergence in sup-norm between outer iterates
};

enum class RmdStatus { Optimal, Infeasible, MaxIterations };

struct RmdResult {
    Vector theta_hat;
    RmdStatus status = RmdStatus::Infeasible;
    std::size_t iterations = 0;
    double constraint_slack = 0.0;  // max(0, ||g_hat(theta)||_inf - lambda)
};

struct IdentifiabilityReport {
    std::size_t l = 0;
    double sigma_min_l = 0.0;
    double sigma_max_l = 0.0;
    double mu_n = 0.0;
    double lower_bound_q1 = 0.0;  // s^{-1} mu_n
    double lower_bound_q2 = 0.0;  // s^{-1/2} mu_n
    double max_row_l1 = 0.0;      // L_n diagnostic: max row l1 norm of G
};

// min ||theta||_1 subject to ||G_hat theta + g0_hat||_inf <= lambda,
// via the split theta = theta+ - theta-.
RmdResult rmd_linear(const LinearScore& score, double lambda);

// Sequential linearization for nonlinear moments; the returned point is
// re-checked against the true constraint and the violation reported as slack.
RmdResult rmd_nonlinear(const ScoreModel& score, const RmdConfig& cfg,
                        const Vector& theta_init);

// Dantzig selector: G_hat = -E_n[W W'], g0_hat = E_n[y W].
RmdResult dantzig_regression(const Matrix& W, const Vector& y, double lambda);

// Instrumental-variables variant: G_hat = -E_n[Z W'], g0_hat = E_n[y Z].
RmdResult iv_rmd(const Matrix& Z, const Matrix& W, const Vector& y, double lambda);

// Brute-force l-sparse extremal singular values:
//   sigma_min(l) = min over column subsets |H|<=l of max over row subsets
//   |J|<=l of sigma_min(G_{J,H}); sigma_max(l) = max over both subsets.
// Guarded by a combinatorial budget C(p,l) C(m,l) <= 1e6.
std::pair<double, double> sparse_singular_values(const Matrix& G, std::size_t l);

double identifiability_lower_bound(std::size_t s, double mu_n, int q);

IdentifiabilityReport identifiability_report(const Matrix& G, std::size_t l,
                                             std::size_t s);

}  // namespace hdinfer::rmd
