#include "hdinfer/mam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hdinfer::mam {

void MamProblem::validate() const {
    if (influence.cols != theta_hat.size())
        throw std::invalid_argument("MamProblem: influence.cols != len(theta_hat)");
    if (influence.rows < 2)
        throw std::invalid_argument("MamProblem: need at least two observations");
}

Vector influence_scale(const MamProblem& prob) {
    prob.validate();
    const std::size_t n = prob.n();
    const std::size_t p = prob.p();
    Vector scale(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = prob.influence(i, j);
            acc += z * z;
        }
        const double m2 = acc / static_cast<double>(n);
        if (m2 <= 0.0)
            throw std::runtime_error("degenerate influence column " + std::to_string(j) +
                                     ": zero empirical second moment");
        scale[j] = std::sqrt(m2);
    }
    return scale;
}

TStats t_statistics(const MamProblem& prob, const Vector& null_values) {
    if (null_values.size() != prob.p())
        throw std::invalid_argument("t_statistics: null_values length mismatch");
    TStats out;
    out.scale = influence_scale(prob);
    const double sqrt_n = std::sqrt(static_cast<double>(prob.n()));
    out.values.resize(prob.p());
    for (std::size_t j = 0; j < prob.p(); ++j)
        out.values[j] = sqrt_n * (prob.theta_hat[j] - null_values[j]) / out.scale[j];
    return out;
}

double moderate_deviation_critical(std::size_t p, double alpha) {
    if (p < 1) throw std::invalid_argument("moderate_deviation_critical: p must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("moderate_deviation_critical: alpha must lie in (0,1)");
    const double tail = alpha / static_cast<double>(p);
    if (!(tail < 1.0))
        throw std::invalid_argument("moderate_deviation_critical: alpha/p must be < 1");
    return std_normal_quantile(1.0 - tail);
}

MaximalDiagnostic maximal_diagnostic(const MamProblem& prob) {
    const Vector zeros(prob.p(), 0.0);
    const TStats t = t_statistics(prob, zeros);
    MaximalDiagnostic d;
    for (double v : t.values) d.max_abs_t = std::max(d.max_abs_t, std::fabs(v));
    d.threshold = std::sqrt(2.0 * std::log(static_cast<double>(prob.p()) *
                                           static_cast<double>(prob.n())));
    return d;
}

ConditionMReport condition_m_diagnostics(const MamProblem& prob) {
    prob.validate();
    const std::size_t n = prob.n();
    const std::size_t p = prob.p();
    ConditionMReport rep;
    rep.min_second_moment = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) {
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = prob.influence(i, j);
            const double z2 = z * z;
            m2 += z2;
            m3 += std::fabs(z) * z2;
            m4 += z2 * z2;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        rep.min_second_moment = std::min(rep.min_second_moment, m2 * inv_n);
        rep.max_abs_third_moment = std::max(rep.max_abs_third_moment, m3 * inv_n);
        rep.max_fourth_moment = std::max(rep.max_fourth_moment, m4 * inv_n);
    }
    return rep;
}

}  // namespace hdinfer::mam
