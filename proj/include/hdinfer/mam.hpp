#pragma once

#include "hdinfer/linalg.hpp"

namespace hdinfer::mam {

// Approximate-means problem: a p-vector estimate together with the n x p
// matrix of per-observation influence values that drive its fluctuations.
struct MamProblem {
    Vector theta_hat;
    Matrix influence;  // n rows, p columns

    std::size_t n() const { return influence.rows; }
    std::size_t p() const { return theta_hat.size(); }

    void validate() const;
};

struct TStats {
    Vector values;
    Vector scale;  // per-coordinate root empirical second moment
};

struct ConditionMReport {
    double min_second_moment = 0.0;
    double max_abs_third_moment = 0.0;
    double max_fourth_moment = 0.0;
};

// Per-column root empirical second moments (E_n[Z^2])^{1/2}; throws a
// degenerate-column error naming the first column with zero second moment.
Vector influence_scale(const MamProblem& prob);

// t_j = sqrt(n) (theta_hat_j - null_j) / (E_n[Z_j^2])^{1/2}.
TStats t_statistics(const MamProblem& prob, const Vector& null_values);

// Phi^{-1}(1 - alpha/p): heavy-tail-robust per-coordinate critical value.
double moderate_deviation_critical(std::size_t p, double alpha);

struct MaximalDiagnostic {
    double max_abs_t = 0.0;
    double threshold = 0.0;  // sqrt(2 log(p n))
};

// Max self-normalized statistic of the zero-centered problem against the
// sqrt(2 log(pn)) envelope.
MaximalDiagnostic maximal_diagnostic(const MamProblem& prob);

ConditionMReport condition_m_diagnostics(const MamProblem& prob);

}  // namespace hdinfer::mam
