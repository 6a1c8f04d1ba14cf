#pragma once

#include <set>

#include "hdinfer/bootstrap.hpp"
#include "hdinfer/linalg.hpp"
#include "hdinfer/mam.hpp"

namespace hdinfer::regularized_means {

// Structural assumptions on the target vector: exact sparsity (s nonzeros),
// approximate sparsity (amplitude A, decay a), or a dense-but-bounded l1 ball.
struct SparsityModel {
    enum class Kind { ExactlySparse, ApproximatelySparse, BoundedL1 } kind;
    std::size_t s = 8;        // ExactlySparse support size
    double amplitude = 50.0;  // ExactlySparse coefficient scale
    double A = 10.0;          // ApproximatelySparse amplitude
    double a = 1.5;           // ApproximatelySparse decay exponent (> 1/2)
    double K = 10.0;          // BoundedL1 budget

    static SparsityModel exactly_sparse(std::size_t s, double amplitude = 50.0) {
        return {Kind::ExactlySparse, s, amplitude, 0.0, 0.0, 0.0};
    }
    static SparsityModel approximately_sparse(double A, double a) {
        return {Kind::ApproximatelySparse, 0, 0.0, A, a, 0.0};
    }
    static SparsityModel bounded_l1(double K) {
        return {Kind::BoundedL1, 0, 0.0, 0.0, 0.0, K};
    }
};

struct RegularizedEstimate {
    Vector theta_tilde;
    double lambda_used = 0.0;
    std::set<std::size_t> support;
};

// theta_j = (|hat_j| - lambda)_+ sign(hat_j).
RegularizedEstimate soft_threshold(const Vector& theta_hat, double lambda);

// theta_j = hat_j 1{|hat_j| > rho}.
RegularizedEstimate selection_threshold(const Vector& theta_hat, double rho);

enum class LambdaRule { SelfNormalized, IdealNoise, Bootstrap };

// SelfNormalized: n^{-1/2} Phi^{-1}(1 - alpha/(2p)) max_j (E_n Z^2)^{1/2};
// IdealNoise: n^{-1/2} Phi^{-1}(1 - alpha/(2p)) for unit noise scale sigma;
// Bootstrap: unit-weight Gaussian sup quantile divided by sqrt(n).
double select_lambda_self_normalized(const mam::MamProblem& prob, double alpha);
double select_lambda_ideal_noise(std::size_t n, std::size_t p, double alpha,
                                 double sigma = 1.0);
double select_lambda_bootstrap(const mam::MamProblem& prob, double alpha,
                               const bootstrap::BootstrapConfig& cfg);

// Worst-case l_q error bound matching the sparsity model:
//   BoundedL1: 2 K^{1/q} lambda^{1-1/q};  ExactlySparse: 2 s^{1/q} lambda;
//   ApproximatelySparse: 2 s^{1/q} lambda + 2 (2^{aq} s lambda^q / (aq-1))^{1/q}
//   with effective dimension s = ceil((A/lambda)^{1/a}).
double theoretical_error_bound(const SparsityModel& model, double lambda, double q);

// The target vectors used in the simulation figures:
//   ExactlySparse: theta_j = 50/j^{3/2} for j <= s, else 0;
//   ApproximatelySparse: theta_j = A/j^a;
//   BoundedL1: base K/(2p) plus a scaled nondecreasing rearrangement of
//   standard exponentials, rescaled so ||theta||_1 <= K.
Vector generate_sparse_vector(const SparsityModel& model, std::size_t p, Rng& rng);

}  // namespace hdinfer::regularized_means
