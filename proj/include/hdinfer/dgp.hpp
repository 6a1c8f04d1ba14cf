#pragma once

#include "hdinfer/linalg.hpp"
#include "hdinfer/mam.hpp"
#include "hdinfer/regularized_means.hpp"

namespace hdinfer::dgp {

struct MamDataset {
    mam::MamProblem problem;
    Vector theta0;
};

struct RegressionDataset {
    Matrix W;  // n x p design
    Matrix Z;  // n x m instruments (empty unless IV)
    Vector y;
    Vector theta0;
};

struct RctDataset {
    mam::MamProblem problem;
    Vector theta0;
    Vector treated;  // D_i indicators
    double gamma = 0.5;
};

// Z_ij = W_ij eps_i with a uniform design drawn once from `design_seed`
// (held fixed across Monte Carlo replications while `seed` varies),
// eps_i ~ t(4), theta0 = 0, and theta_hat the column means of Z.
MamDataset figure1_dgp(std::size_t n, std::size_t p, std::uint64_t seed,
                       std::uint64_t design_seed);

enum class DesignKind { IdentityCov, Toeplitz };

// y = W'theta0 + sigma eps with Gaussian design and noise.
RegressionDataset sparse_linear_dgp(std::size_t n, std::size_t p,
                                    const regularized_means::SparsityModel& model,
                                    double sigma, DesignKind design, double rho,
                                    std::uint64_t seed);

// Z Gaussian instruments; W = Z Pi + v with strength pi on s matched
// instruments; homoskedastic Gaussian noise independent of Z.
RegressionDataset homoskedastic_iv_dgp(std::size_t n, std::size_t p, std::size_t m,
                                       std::size_t s, double sigma, double pi,
                                       std::uint64_t seed);

// Binary outcome with P(y=1 | W) = exp(W'theta0)/(1 + exp(W'theta0)).
RegressionDataset logistic_dgp(std::size_t n, std::size_t p,
                               const regularized_means::SparsityModel& model,
                               std::uint64_t seed);

// Randomized trial with p outcomes; influence values use sample group means
// as the plug-in for the conditional expectations.
RctDataset rct_outcomes_dgp(std::size_t n, std::size_t p, double gamma,
                            const Vector& effects, std::uint64_t seed);

// X_ij = theta0_j + N(0,1); Z_ij = X_ij - theta_hat_j. signal_count leading
// coordinates get the separation 2 sqrt(log p) / sqrt(n) scaled by `strength`.
MamDataset means_model_dgp(std::size_t n, std::size_t p, std::size_t signal_count,
                           double strength, std::uint64_t seed);

}  // namespace hdinfer::dgp
