#pragma once

#include <string>
#include <vector>

#include "hdinfer/linalg.hpp"
#include "hdinfer/rmd.hpp"

namespace hdinfer::drgmm {

struct GmmPlugins {
    Matrix G_hat;      // m x p Jacobian at theta_hat
    Matrix Omega_hat;  // m x m symmetrized second-moment matrix of the scores
};

enum class RowStatus { Optimal, Infeasible };

// Rows of the moment-selection estimate: min ||gamma_j||_1 subject to
// ||gamma_j Omega_hat - (G_hat')_j||_inf <= lambda_j.
struct GammaEstimate {
    Matrix gamma_hat;  // p x m
    Vector penalties;
    std::vector<RowStatus> row_status;
};

// Rows of the inverse-Gram estimate: min ||mu_j||_1 subject to
// ||mu_j gamma_hat G_hat - e_j'||_inf <= lambda_j. Since gamma_hat G_hat is
// p x p, each mu_j lives in R^p.
struct MuEstimate {
    Matrix mu_hat;  // p x p
    Vector penalties;
    std::vector<RowStatus> row_status;
};

struct RemainderReport {
    double r1_bar = 0.0;
    double r2_bar = 0.0;
    double r3_bar = 0.0;
};

struct DrgmmResult {
    Vector theta_hat;    // first-stage regularized estimate
    Vector theta_check;  // debiased update
    Matrix scores;       // n x p influence values mu gamma g(X_i, theta_hat)
    Matrix V_hat;        // p x p asymptotic variance estimate
    GammaEstimate gamma;
    MuEstimate mu;
    rmd::RmdStatus rmd_status = rmd::RmdStatus::Optimal;
    std::vector<std::string> warnings;
};

struct OrthogonalScoreStat {
    Vector statistic;  // sqrt(n) (xi - xi G mu gamma) g_hat, length p'
    Matrix V_M_hat;    // p' x p'
};

GmmPlugins plugin_G_Omega(const rmd::ScoreModel& score, const Vector& theta_hat);

enum class PenaltyMode { Fixed, Adaptive };

// Fixed mode: per-row penalties given directly. Adaptive mode: constraint
// right side ||gamma_j||_1 n^{-1/2} l_Omega + n^{-1/2} l_G, encoded with an
// auxiliary l1-budget variable in the row LP.
GammaEstimate estimate_gamma(const GmmPlugins& plugins, const Vector& penalties);
GammaEstimate estimate_gamma_adaptive(const GmmPlugins& plugins, std::size_t n,
                                      double l_omega, double l_g);

MuEstimate estimate_mu(const GammaEstimate& gamma, const GmmPlugins& plugins,
                       const Vector& penalties);
MuEstimate estimate_mu_adaptive(const GammaEstimate& gamma, const GmmPlugins& plugins,
                                std::size_t n, double l_gram, double l_e);

Vector debias(const Vector& theta_hat, const MuEstimate& mu, const GammaEstimate& gamma,
              const Vector& g_hat_at_theta);

// V = (G' Omega^{-1} G)^{-1} with a documented ridge of 1e-10 trace(Omega)/m
// on both inversions.
Matrix asymptotic_variance(const Matrix& G, const Matrix& Omega);

// Default penalty scale: c n^{-1/2} Phi^{-1}(1 - 1/(p m n)).
double default_penalty(std::size_t n, std::size_t p, std::size_t m, double c = 0.5);

struct DrgmmOptions {
    rmd::RmdConfig rmd_cfg;
    Vector gamma_penalties;  // length p
    Vector mu_penalties;     // length p
    Vector theta_init;       // empty => zero vector
};

// Steps: RMD first stage, plug-ins, gamma rows, mu rows, debias; emits the
// influence scores and the variance estimate.
DrgmmResult drgmm_pipeline(const rmd::ScoreModel& score, const DrgmmOptions& opts);

// Simulation-only diagnostic; requires oracle quantities.
RemainderReport remainder_bounds(const MuEstimate& mu, const GammaEstimate& gamma,
                                 const Matrix& G_hat, const Matrix& G_tilde,
                                 const Vector& theta_hat, const Vector& theta0,
                                 const Vector& g_hat_at_theta0, const Matrix& gamma0,
                                 const Matrix& mu0, std::size_t n);

OrthogonalScoreStat orthogonal_score(const Matrix& xi, const GmmPlugins& plugins,
                                     const MuEstimate& mu, const GammaEstimate& gamma,
                                     const Vector& g_hat_alpha_theta, std::size_t n);

}  // namespace hdinfer::drgmm
