#include "hdinfer/rmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdinfer::rmd {

namespace {

double constraint_slack(const Matrix& G, const Vector& g0, const Vector& theta,
                        double lambda) {
    Vector g = mat_vec(G, theta);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0[i];
    return std::max(0.0, norm(g, NormKind::LInf) - lambda);
}

}  // namespace

RmdResult rmd_linear(const LinearScore& score, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("rmd_linear: lambda must be >= 0");
    const std::size_t m = score.G_hat.rows;
    const std::size_t p = score.G_hat.cols;
    if (score.g0_hat.size() != m)
        throw std::invalid_argument("rmd_linear: g0_hat length mismatch");

    // Split theta = theta+ - theta-; minimize the sum of both halves subject
    // to the two-sided moment box.
    lp::LinearProgram prog;
    prog.objective.assign(2 * p, 1.0);
    prog.constraints = Matrix(2 * m, 2 * p, 0.0);
    prog.rhs.resize(2 * m);
    prog.senses.assign(2 * m, lp::Sense::LessEqual);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double g = score.G_hat(i, j);
            prog.constraints(i, j) = g;
            prog.constraints(i, p + j) = -g;
            prog.constraints(m + i, j) = -g;
            prog.constraints(m + i, p + j) = g;
        }
        prog.rhs[i] = lambda - score.g0_hat[i];
        prog.rhs[m + i] = lambda + score.g0_hat[i];
    }
    const lp::LpSolution sol = lp::solve_lp(prog);
    RmdResult res;
    res.iterations = 1;
    if (sol.status != lp::LpStatus::Optimal) {
        res.status = RmdStatus::Infeasible;
        return res;
    }
    res.theta_hat.resize(p);
    for (std::size_t j = 0; j < p; ++j) res.theta_hat[j] = sol.x[j] - sol.x[p + j];
    res.status = RmdStatus::Optimal;
    res.constraint_slack =
        constraint_slack(score.G_hat, score.g0_hat, res.theta_hat, lambda);
    return res;
}

RmdResult rmd_nonlinear(const ScoreModel& score, const RmdConfig& cfg,
                        const Vector& theta_init) {
    if (cfg.lambda < 0.0) throw std::invalid_argument("rmd_nonlinear: lambda must be >= 0");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("rmd_nonlinear: tol must be > 0");
    if (theta_init.size() != score.p)
        throw std::invalid_argument("rmd_nonlinear: theta_init length mismatch");
    Vector theta = theta_init;
    RmdResult res;
    res.status = RmdStatus::MaxIterations;
    for (std::size_t iter = 1; iter <= cfg.max_outer_iterations; ++iter) {
        const Matrix G = score.jacobian(theta);
        Vector offset = score.g_hat(theta);
        const Vector Gt = mat_vec(G, theta);
        for (std::size_t i = 0; i < offset.size(); ++i) offset[i] -= Gt[i];
        const RmdResult inner = rmd_linear({G, offset}, cfg.lambda);
        res.iterations = iter;
        if (inner.status != RmdStatus::Optimal) {
            res.status = RmdStatus::Infeasible;
            res.theta_hat = theta;
            break;
        }
        double step = 0.0;
        for (std::size_t j = 0; j < score.p; ++j)
            step = std::max(step, std::fabs(inner.theta_hat[j] - theta[j]));
        theta = inner.theta_hat;
        if (step < cfg.tol) {
            res.status = RmdStatus::Optimal;
            break;
        }
    }
    res.theta_hat = theta;
    // Re-check the genuine nonlinear constraint at the returned point.
    res.constraint_slack =
        std::max(0.0, norm(score.g_hat(theta), NormKind::LInf) - cfg.lambda);
    return res;
}

namespace {

// G_hat = -E_n[A' W] and g0_hat = E_n[y A] for instrument matrix A.
LinearScore regression_moments(const Matrix& A, const Matrix& W, const Vector& y) {
    const std::size_t n = A.rows;
    if (W.rows != n || y.size() != n)
        throw std::invalid_argument(
            "rmd: row counts of instruments, design, and outcome must match");
    const std::size_t m = A.cols;
    const std::size_t p = W.cols;
    LinearScore score;
    score.G_hat = Matrix(m, p, 0.0);
    score.g0_hat.assign(m, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = &A.data[i * m];
        const double* wrow = &W.data[i * p];
        for (std::size_t k = 0; k < m; ++k) {
            score.g0_hat[k] += arow[k] * y[i] * inv_n;
            double* grow = &score.G_hat.data[k * p];
            const double ak = -arow[k] * inv_n;
            for (std::size_t j = 0; j < p; ++j) grow[j] += ak * wrow[j];
        }
    }
    return score;
}

}  // namespace

RmdResult dantzig_regression(const Matrix& W, const Vector& y, double lambda) {
    return rmd_linear(regression_moments(W, W, y), lambda);
}

RmdResult iv_rmd(const Matrix& Z, const Matrix& W, const Vector& y, double lambda) {
    return rmd_linear(regression_moments(Z, W, y), lambda);
}

namespace {

double binomial_count(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

// Visit all subsets of {0..n-1} of size exactly k.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i-- > 0) {
            if (idx[i] < n - k + i) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
    }
}

Matrix submatrix(const Matrix& G, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
    Matrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = G(rows[i], cols[j]);
    return s;
}

}  // namespace

std::pair<double, double> sparse_singular_values(const Matrix& G, std::size_t l) {
    const std::size_t m = G.rows;
    const std::size_t p = G.cols;
    if (l < 1 || l > std::min(m, p))
        throw std::invalid_argument("sparse_singular_values: invalid sparsity level");
    if (binomial_count(p, l) * binomial_count(m, l) > 1e6)
        throw std::runtime_error("sparse_singular_values: combinatorial budget exceeded");

    double sigma_min_l = std::numeric_limits<double>::infinity();
    double sigma_max_l = 0.0;
    // Budgets over "at most l" rows/columns: enumerate every size from 1 to l.
    for (std::size_t hc = 1; hc <= l; ++hc) {
        for_each_subset(p, hc, [&](const std::vector<std::size_t>& H) {
            double best_min = 0.0;
            for (std::size_t jc = 1; jc <= l; ++jc) {
                for_each_subset(m, jc, [&](const std::vector<std::size_t>& J) {
                    const Vector sv = singular_values(submatrix(G, J, H));
                    best_min = std::max(best_min, sv.front());
                    sigma_max_l = std::max(sigma_max_l, sv.back());
                });
            }
            sigma_min_l = std::min(sigma_min_l, best_min);
        });
    }
    return {sigma_min_l, sigma_max_l};
}

double identifiability_lower_bound(std::size_t s, double mu_n, int q) {
    if (s < 1) throw std::invalid_argument("identifiability_lower_bound: s must be >= 1");
    if (!(mu_n > 0.0 && mu_n < 1.0))
        throw std::invalid_argument("identifiability_lower_bound: mu_n must lie in (0,1)");
    if (q != 1 && q != 2)
        throw std::invalid_argument("identifiability_lower_bound: q must be 1 or 2");
    return std::pow(static_cast<double>(s), -1.0 / static_cast<double>(q)) * mu_n;
}

IdentifiabilityReport identifiability_report(const Matrix& G, std::size_t l,
                                             std::size_t s) {
    IdentifiabilityReport rep;
    rep.l = l;
    const auto [smin, smax] = sparse_singular_values(G, l);
    rep.sigma_min_l = smin;
    rep.sigma_max_l = smax;
    // mu_n plug-in: the sparse smallest singular value, clipped into (0,1)
    // only for the Condition-LID style lower bounds below.
    rep.mu_n = smin;
    const double mu_for_bound = std::min(std::max(smin, 1e-12), 1.0 - 1e-12);
    rep.lower_bound_q1 = identifiability_lower_bound(s, mu_for_bound, 1);
    rep.lower_bound_q2 = identifiability_lower_bound(s, mu_for_bound, 2);
    for (std::size_t i = 0; i < G.rows; ++i) {
        double row_l1 = 0.0;
        for (std::size_t j = 0; j < G.cols; ++j) row_l1 += std::fabs(G(i, j));
        rep.max_row_l1 = std::max(rep.max_row_l1, row_l1);
    }
    return rep;
}

}  // namespace hdinfer::rmd
