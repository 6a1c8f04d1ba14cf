#pragma once

#include "hdinfer/linalg.hpp"
#include "hdinfer/mam.hpp"

namespace hdinfer::bootstrap {

enum class Scheme { Gaussian, Empirical };

struct BootstrapConfig {
    Scheme scheme = Scheme::Gaussian;
    std::size_t B = 1000;
    std::uint64_t seed = 0;
};

struct SupDraws {
    Vector values;  // B sup-norm statistics
    Scheme scheme = Scheme::Gaussian;
};

// Multiplier bootstrap: per draw, statistic = max_j |w_j n^{-1/2} sum_i e_i Z_ij|
// with e_i i.i.d. standard normal.
SupDraws gaussian_bootstrap_sup(const mam::MamProblem& prob, const Vector& weights,
                                const BootstrapConfig& cfg);

// Empirical bootstrap: multinomial(n, 1/n) counts e; statistic uses (e_i - 1).
SupDraws empirical_bootstrap_sup(const mam::MamProblem& prob, const Vector& weights,
                                 const BootstrapConfig& cfg);

// Empirical (1-alpha)-quantile of the sup draws.
double lambda_hat(const SupDraws& draws, double alpha);

// min(sigma_bar Phi^{-1}(1 - a/(2p)), sigma_bar sqrt(2 log(2p/a))): a
// deterministic upper envelope for the Gaussian-bootstrap quantile.
double gaussian_quantile_bound(double sigma_bar, std::size_t p, double a);

// Per-draw self-normalized coordinates: B x p matrix with entry
// (b, j) = n^{-1/2} sum_i e_i Z_ij / (E_n[Z_j^2])^{1/2}. Shared by the
// stepdown procedure so every step prices quantiles off the same draws.
Matrix gaussian_coordinate_draws(const mam::MamProblem& prob, const BootstrapConfig& cfg);

}  // namespace hdinfer::bootstrap
