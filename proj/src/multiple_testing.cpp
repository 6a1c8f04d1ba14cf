#include "hdinfer/multiple_testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hdinfer::multiple_testing {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("multiple_testing: alpha must lie in (0,1)");
}

double stat_value(double t, Sidedness side) {
    return side == Sidedness::TwoSided ? std::fabs(t) : t;
}

double gaussian_critical(std::size_t active_count, double alpha, Sidedness side) {
    const double denom = static_cast<double>(active_count) *
                         (side == Sidedness::TwoSided ? 2.0 : 1.0);
    return std_normal_quantile(1.0 - alpha / denom);
}

}  // namespace

FwerResult bonferroni(const mam::TStats& t, double alpha, Sidedness side) {
    check_alpha(alpha);
    const std::size_t p = t.values.size();
    FwerResult res;
    res.method = "bonferroni";
    FwerStep step;
    step.active.resize(p);
    std::iota(step.active.begin(), step.active.end(), std::size_t{0});
    step.critical_value = gaussian_critical(p, alpha, side);
    for (std::size_t j = 0; j < p; ++j)
        if (stat_value(t.values[j], side) > step.critical_value) res.rejected.insert(j);
    res.steps.push_back(std::move(step));
    return res;
}

namespace {

// Shared stepdown loop: `critical` maps the current active set to c_{1-alpha,w}.
template <typename CriticalFn>
FwerResult stepdown(const Vector& stats, CriticalFn critical, const std::string& method) {
    const std::size_t p = stats.size();
    FwerResult res;
    res.method = method;
    std::vector<std::size_t> active(p);
    std::iota(active.begin(), active.end(), std::size_t{0});
    while (!active.empty()) {
        FwerStep step;
        step.active = active;
        step.critical_value = critical(active);
        std::vector<std::size_t> keep;
        keep.reserve(active.size());
        for (std::size_t j : active) {
            if (stats[j] > step.critical_value)
                res.rejected.insert(j);
            else
                keep.push_back(j);
        }
        const bool progressed = keep.size() < active.size();
        res.steps.push_back(std::move(step));
        if (!progressed) break;
        active = std::move(keep);
    }
    return res;
}

}  // namespace

FwerResult holm_stepdown(const mam::TStats& t, double alpha, Sidedness side) {
    check_alpha(alpha);
    Vector stats(t.values.size());
    for (std::size_t j = 0; j < stats.size(); ++j) stats[j] = stat_value(t.values[j], side);
    return stepdown(
        stats,
        [&](const std::vector<std::size_t>& active) {
            return gaussian_critical(active.size(), alpha, side);
        },
        "holm");
}

FwerResult romano_wolf_stepdown(const mam::MamProblem& prob, const Vector& null_values,
                                double alpha, const bootstrap::BootstrapConfig& cfg,
                                Sidedness side) {
    check_alpha(alpha);
    if (cfg.scheme != bootstrap::Scheme::Gaussian)
        throw std::invalid_argument("romano_wolf_stepdown: Gaussian scheme required");
    const mam::TStats t = mam::t_statistics(prob, null_values);
    // One shared draw matrix across steps keeps the critical values exactly
    // monotone in the active set.
    const Matrix draws = bootstrap::gaussian_coordinate_draws(prob, cfg);
    Vector stats(t.values.size());
    for (std::size_t j = 0; j < stats.size(); ++j) stats[j] = stat_value(t.values[j], side);
    Vector per_draw(draws.rows);
    return stepdown(
        stats,
        [&](const std::vector<std::size_t>& active) {
            for (std::size_t b = 0; b < draws.rows; ++b) {
                double m = -std::numeric_limits<double>::infinity();
                for (std::size_t j : active)
                    m = std::max(m, stat_value(draws(b, j), side));
                per_draw[b] = m;
            }
            return empirical_quantile(per_draw, 1.0 - alpha);
        },
        "romano_wolf");
}

FdrResult benjamini_hochberg(const mam::TStats& t, double alpha) {
    check_alpha(alpha);
    const std::size_t p = t.values.size();
    Vector sorted = t.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    // k_hat = largest j in {0..p} with 1 - Phi(t_(j)) <= alpha j / p; t_(0) = +inf.
    std::size_t k_hat = 0;
    for (std::size_t j = p; j >= 1; --j) {
        const double pval = 1.0 - std_normal_cdf(sorted[j - 1]);
        if (pval <= alpha * static_cast<double>(j) / static_cast<double>(p)) {
            k_hat = j;
            break;
        }
    }
    FdrResult res;
    res.k_hat = k_hat;
    res.threshold =
        (k_hat == 0) ? std::numeric_limits<double>::infinity() : sorted[k_hat - 1];
    for (std::size_t j = 0; j < p; ++j)
        if (t.values[j] >= res.threshold) res.rejected.insert(j);
    return res;
}

double max_column_correlation(const mam::MamProblem& prob) {
    prob.validate();
    const std::size_t n = prob.n();
    const std::size_t p = prob.p();
    Vector mean(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) mean[j] += prob.influence(i, j);
    for (double& m : mean) m /= static_cast<double>(n);
    Matrix cov(p, p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = j; k < p; ++k)
                cov(j, k) += (prob.influence(i, j) - mean[j]) *
                             (prob.influence(i, k) - mean[k]);
    double best = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j + 1; k < p; ++k) {
            const double denom = std::sqrt(cov(j, j) * cov(k, k));
            if (denom > 0.0) best = std::max(best, std::fabs(cov(j, k)) / denom);
        }
    }
    return best;
}

}  // namespace hdinfer::multiple_testing
