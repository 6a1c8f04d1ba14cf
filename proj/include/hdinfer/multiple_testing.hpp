#pragma once

#include <set>
#include <string>
#include <vector>

#include "hdinfer/bootstrap.hpp"
#include "hdinfer/mam.hpp"

namespace hdinfer::multiple_testing {

enum class Sidedness { OneSided, TwoSided };

struct FwerStep {
    std::vector<std::size_t> active;  // hypotheses still in play at this step
    double critical_value = 0.0;
};

struct FwerResult {
    std::set<std::size_t> rejected;
    std::string method;
    std::vector<FwerStep> steps;
};

struct FdrResult {
    std::size_t k_hat = 0;
    double threshold = 0.0;  // +inf when k_hat == 0
    std::set<std::size_t> rejected;
};

// Single-step: reject {j : t_j > Phi^{-1}(1 - alpha/p)} (one-sided) or
// {j : |t_j| > Phi^{-1}(1 - alpha/(2p))} (two-sided).
FwerResult bonferroni(const mam::TStats& t, double alpha,
                      Sidedness side = Sidedness::OneSided);

// Stepdown with critical value Phi^{-1}(1 - alpha/|active|).
FwerResult holm_stepdown(const mam::TStats& t, double alpha,
                         Sidedness side = Sidedness::OneSided);

// Bootstrap stepdown: critical value at each step is the (1-alpha) empirical
// quantile of the per-draw max of self-normalized coordinates over the active
// set, priced off one shared draw matrix (Gaussian multipliers).
FwerResult romano_wolf_stepdown(const mam::MamProblem& prob, const Vector& null_values,
                                double alpha, const bootstrap::BootstrapConfig& cfg,
                                Sidedness side = Sidedness::OneSided);

// Step-up procedure on one-sided t-statistics with Gaussian p-values.
FdrResult benjamini_hochberg(const mam::TStats& t, double alpha);

// Condition-dependence diagnostic: max absolute off-diagonal correlation of
// the influence columns.
double max_column_correlation(const mam::MamProblem& prob);

}  // namespace hdinfer::multiple_testing
