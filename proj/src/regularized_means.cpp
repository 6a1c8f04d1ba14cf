#include "hdinfer/regularized_means.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdinfer::regularized_means {

RegularizedEstimate soft_threshold(const Vector& theta_hat, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
    RegularizedEstimate est;
    est.lambda_used = lambda;
    est.theta_tilde.resize(theta_hat.size());
    for (std::size_t j = 0; j < theta_hat.size(); ++j) {
        const double mag = std::fabs(theta_hat[j]) - lambda;
        const double v = (mag > 0.0) ? std::copysign(mag, theta_hat[j]) : 0.0;
        est.theta_tilde[j] = v;
        if (v != 0.0) est.support.insert(j);
    }
    return est;
}

RegularizedEstimate selection_threshold(const Vector& theta_hat, double rho) {
    if (rho < 0.0) throw std::invalid_argument("selection_threshold: rho must be >= 0");
    RegularizedEstimate est;
    est.lambda_used = rho;
    est.theta_tilde.resize(theta_hat.size());
    for (std::size_t j = 0; j < theta_hat.size(); ++j) {
        const double v = (std::fabs(theta_hat[j]) > rho) ? theta_hat[j] : 0.0;
        est.theta_tilde[j] = v;
        if (v != 0.0) est.support.insert(j);
    }
    return est;
}

double select_lambda_self_normalized(const mam::MamProblem& prob, double alpha) {
    const Vector scale = mam::influence_scale(prob);
    const double max_scale = *std::max_element(scale.begin(), scale.end());
    const double crit =
        std_normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(prob.p())));
    return crit * max_scale / std::sqrt(static_cast<double>(prob.n()));
}

double select_lambda_ideal_noise(std::size_t n, std::size_t p, double alpha,
                                 double sigma) {
    if (n < 1 || p < 1)
        throw std::invalid_argument("select_lambda_ideal_noise: n, p must be >= 1");
    if (!(sigma > 0.0))
        throw std::invalid_argument("select_lambda_ideal_noise: sigma must be positive");
    const double crit = std_normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(p)));
    return sigma * crit / std::sqrt(static_cast<double>(n));
}

double select_lambda_bootstrap(const mam::MamProblem& prob, double alpha,
                               const bootstrap::BootstrapConfig& cfg) {
    const Vector unit(prob.p(), 1.0);
    const bootstrap::SupDraws draws = bootstrap::gaussian_bootstrap_sup(prob, unit, cfg);
    return bootstrap::lambda_hat(draws, alpha) / std::sqrt(static_cast<double>(prob.n()));
}

double theoretical_error_bound(const SparsityModel& model, double lambda, double q) {
    if (q < 1.0) throw std::invalid_argument("theoretical_error_bound: q must be >= 1");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("theoretical_error_bound: lambda must be >= 0");
    switch (model.kind) {
        case SparsityModel::Kind::BoundedL1:
            if (!(model.K > 0.0))
                throw std::invalid_argument("theoretical_error_bound: K must be positive");
            return 2.0 * std::pow(model.K, 1.0 / q) * std::pow(lambda, 1.0 - 1.0 / q);
        case SparsityModel::Kind::ExactlySparse:
            if (model.s < 1)
                throw std::invalid_argument("theoretical_error_bound: s must be >= 1");
            return 2.0 * std::pow(static_cast<double>(model.s), 1.0 / q) * lambda;
        case SparsityModel::Kind::ApproximatelySparse: {
            if (!(model.A > 0.0 && model.a > 0.5))
                throw std::invalid_argument(
                    "theoretical_error_bound: need A > 0 and a > 1/2");
            if (!(q > 1.0 / model.a))
                throw std::invalid_argument("theoretical_error_bound: need q > 1/a");
            if (!(lambda < model.A))
                throw std::invalid_argument("theoretical_error_bound: need lambda < A");
            const double s =
                std::ceil(std::pow(model.A / lambda, 1.0 / model.a));
            const double head = 2.0 * std::pow(s, 1.0 / q) * lambda;
            const double tail =
                2.0 * std::pow(std::pow(2.0, model.a * q) * s * std::pow(lambda, q) /
                                   (model.a * q - 1.0),
                               1.0 / q);
            return head + tail;
        }
    }
    throw std::logic_error("theoretical_error_bound: unknown model");
}

Vector generate_sparse_vector(const SparsityModel& model, std::size_t p, Rng& rng) {
    Vector theta(p, 0.0);
    switch (model.kind) {
        case SparsityModel::Kind::ExactlySparse: {
            const std::size_t s = std::min(model.s, p);
            for (std::size_t j = 0; j < s; ++j)
                theta[j] = model.amplitude / std::pow(static_cast<double>(j + 1), 1.5);
            break;
        }
        case SparsityModel::Kind::ApproximatelySparse:
            for (std::size_t j = 0; j < p; ++j)
                theta[j] = model.A / std::pow(static_cast<double>(j + 1), model.a);
            break;
        case SparsityModel::Kind::BoundedL1: {
            // Base level plus a nondecreasing rearrangement of exponentials,
            // rescaled if the l1 budget would be exceeded.
            const double base = model.K / (2.0 * static_cast<double>(p));
            Vector v(p);
            for (std::size_t j = 0; j < p; ++j) v[j] = rng.exponential();
            std::sort(v.begin(), v.end());
            double total = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                theta[j] = base + base * v[j];
                total += theta[j];
            }
            if (total > model.K)
                for (double& t : theta) t *= model.K / total;
            break;
        }
    }
    return theta;
}

}  // namespace hdinfer::regularized_means
