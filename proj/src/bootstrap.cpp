#include "hdinfer/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdinfer::bootstrap {

namespace {

void check_weights(const Vector& weights, std::size_t p) {
    if (weights.size() != p)
        throw std::invalid_argument("bootstrap: weights length must equal p");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("bootstrap: weights must be positive");
}

// acc_j = sum_i e_i Z_ij, accumulated row-wise for cache locality.
void weighted_column_sums(const Matrix& z, const Vector& e, Vector& acc) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const std::size_t n = z.rows;
    const std::size_t p = z.cols;
    for (std::size_t i = 0; i < n; ++i) {
        const double ei = e[i];
        if (ei == 0.0) continue;
        const double* row = &z.data[i * p];
        for (std::size_t j = 0; j < p; ++j) acc[j] += ei * row[j];
    }
}

double sup_statistic(const Vector& acc, const Vector& weights, double inv_sqrt_n) {
    double m = 0.0;
    for (std::size_t j = 0; j < acc.size(); ++j)
        m = std::max(m, weights[j] * std::fabs(acc[j]) * inv_sqrt_n);
    return m;
}

}  // namespace

SupDraws gaussian_bootstrap_sup(const mam::MamProblem& prob, const Vector& weights,
                                const BootstrapConfig& cfg) {
    prob.validate();
    check_weights(weights, prob.p());
    if (cfg.B < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
    if (cfg.scheme != Scheme::Gaussian)
        throw std::invalid_argument("gaussian_bootstrap_sup: config scheme must be gaussian");
    const std::size_t n = prob.n();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const Rng root(cfg.seed);
    SupDraws out;
    out.scheme = Scheme::Gaussian;
    out.values.resize(cfg.B);
    Vector e(n), acc(prob.p());
    for (std::size_t b = 0; b < cfg.B; ++b) {
        Rng rng = root.fork(b);
        for (std::size_t i = 0; i < n; ++i) e[i] = rng.normal();
        weighted_column_sums(prob.influence, e, acc);
        out.values[b] = sup_statistic(acc, weights, inv_sqrt_n);
    }
    return out;
}

SupDraws empirical_bootstrap_sup(const mam::MamProblem& prob, const Vector& weights,
                                 const BootstrapConfig& cfg) {
    prob.validate();
    check_weights(weights, prob.p());
    if (cfg.B < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
    if (cfg.scheme != Scheme::Empirical)
        throw std::invalid_argument("empirical_bootstrap_sup: config scheme must be empirical");
    const std::size_t n = prob.n();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const Rng root(cfg.seed);
    SupDraws out;
    out.scheme = Scheme::Empirical;
    out.values.resize(cfg.B);
    Vector e(n), acc(prob.p());
    for (std::size_t b = 0; b < cfg.B; ++b) {
        Rng rng = root.fork(b);
        std::fill(e.begin(), e.end(), -1.0);  // centered multinomial counts e_i - 1
        for (std::size_t k = 0; k < n; ++k) e[rng.uniform_below(n)] += 1.0;
        weighted_column_sums(prob.influence, e, acc);
        out.values[b] = sup_statistic(acc, weights, inv_sqrt_n);
    }
    return out;
}

double lambda_hat(const SupDraws& draws, double alpha) {
    if (draws.values.empty()) throw std::invalid_argument("lambda_hat: empty draws");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("lambda_hat: alpha must lie in (0,1)");
    return empirical_quantile(draws.values, 1.0 - alpha);
}

double gaussian_quantile_bound(double sigma_bar, std::size_t p, double a) {
    if (!(sigma_bar > 0.0))
        throw std::invalid_argument("gaussian_quantile_bound: sigma_bar must be positive");
    if (p < 1) throw std::invalid_argument("gaussian_quantile_bound: p must be >= 1");
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("gaussian_quantile_bound: a must lie in (0,1)");
    const double pp = static_cast<double>(p);
    const double tight = std_normal_quantile(1.0 - a / (2.0 * pp));
    const double loose = std::sqrt(2.0 * std::log(2.0 * pp / a));
    return sigma_bar * std::min(tight, loose);
}

Matrix gaussian_coordinate_draws(const mam::MamProblem& prob, const BootstrapConfig& cfg) {
    prob.validate();
    if (cfg.B < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
    if (cfg.scheme != Scheme::Gaussian)
        throw std::invalid_argument("gaussian_coordinate_draws: config scheme must be gaussian");
    const Vector scale = mam::influence_scale(prob);
    const std::size_t n = prob.n();
    const std::size_t p = prob.p();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const Rng root(cfg.seed);
    Matrix draws(cfg.B, p);
    Vector e(n), acc(p);
    for (std::size_t b = 0; b < cfg.B; ++b) {
        Rng rng = root.fork(b);
        for (std::size_t i = 0; i < n; ++i) e[i] = rng.normal();
        weighted_column_sums(prob.influence, e, acc);
        for (std::size_t j = 0; j < p; ++j) draws(b, j) = acc[j] * inv_sqrt_n / scale[j];
    }
    return draws;
}

}  // namespace hdinfer::bootstrap
