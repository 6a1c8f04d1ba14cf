#include "hdinfer/simultaneous_ci.hpp"

#include <cmath>
#include <stdexcept>

namespace hdinfer::simultaneous_ci {

bool SimultaneousBand::covers(const Vector& theta0) const {
    if (theta0.size() != lower.size())
        throw std::invalid_argument("SimultaneousBand::covers: dimension mismatch");
    for (std::size_t j = 0; j < theta0.size(); ++j)
        if (theta0[j] < lower[j] || theta0[j] > upper[j]) return false;
    return true;
}

namespace {

SimultaneousBand build_band(const mam::MamProblem& prob, const Vector& weights,
                            double lambda, BandMethod method) {
    const double sqrt_n = std::sqrt(static_cast<double>(prob.n()));
    SimultaneousBand band;
    band.method = method;
    band.lambda_used = lambda;
    band.weights = weights;
    band.lower.resize(prob.p());
    band.upper.resize(prob.p());
    for (std::size_t j = 0; j < prob.p(); ++j) {
        const double radius = lambda / (weights[j] * sqrt_n);
        band.lower[j] = prob.theta_hat[j] - radius;
        band.upper[j] = prob.theta_hat[j] + radius;
    }
    return band;
}

Vector make_weights(const mam::MamProblem& prob, WeightMode mode) {
    if (mode == WeightMode::Unit) return Vector(prob.p(), 1.0);
    Vector w = mam::influence_scale(prob);  // throws on degenerate columns
    for (double& v : w) v = 1.0 / v;
    return w;
}

}  // namespace

SimultaneousBand simultaneous_intervals(const mam::MamProblem& prob, double alpha,
                                        WeightMode weight_mode,
                                        const bootstrap::BootstrapConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("simultaneous_intervals: alpha must lie in (0,1)");
    const Vector weights = make_weights(prob, weight_mode);
    bootstrap::SupDraws draws;
    BandMethod method;
    if (cfg.scheme == bootstrap::Scheme::Gaussian) {
        draws = bootstrap::gaussian_bootstrap_sup(prob, weights, cfg);
        method = BandMethod::GaussianBootstrap;
    } else {
        draws = bootstrap::empirical_bootstrap_sup(prob, weights, cfg);
        method = BandMethod::EmpiricalBootstrap;
    }
    const double lambda = bootstrap::lambda_hat(draws, alpha);
    return build_band(prob, weights, lambda, method);
}

SimultaneousBand simultaneous_intervals_md(const mam::MamProblem& prob, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("simultaneous_intervals_md: alpha must lie in (0,1)");
    const Vector scale = mam::influence_scale(prob);
    const double crit =
        std_normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(prob.p())));
    // Equivalent to a lambda of crit under inverse-SD weights.
    Vector weights(prob.p());
    for (std::size_t j = 0; j < prob.p(); ++j) weights[j] = 1.0 / scale[j];
    SimultaneousBand band = build_band(prob, weights, crit, BandMethod::ModerateDeviation);
    return band;
}

SimultaneousBand band_from_draws(const mam::MamProblem& prob, const Vector& weights,
                                 const bootstrap::SupDraws& draws, double alpha) {
    const double lambda = bootstrap::lambda_hat(draws, alpha);
    const BandMethod method = (draws.scheme == bootstrap::Scheme::Gaussian)
                                  ? BandMethod::GaussianBootstrap
                                  : BandMethod::EmpiricalBootstrap;
    return build_band(prob, weights, lambda, method);
}

}  // namespace hdinfer::simultaneous_ci
