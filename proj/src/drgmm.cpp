#include "hdinfer/drgmm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hdinfer/lp.hpp"

namespace hdinfer::drgmm {

namespace {

// min ||x||_1 over row vectors x in R^k subject to
// ||x M - r||_inf <= slope ||x||_1 + intercept,
// via the split x = u - v with u, v >= 0 (so ||x||_1 = sum(u + v) at the optimum).
struct RowLpResult {
    Vector x;
    bool feasible = false;
};

RowLpResult solve_row_lp(const Matrix& M, const Vector& r, double slope,
                         double intercept) {
    const std::size_t k = M.rows;
    const std::size_t q = M.cols;
    if (r.size() != q) throw std::invalid_argument("solve_row_lp: target length mismatch");
    lp::LinearProgram prog;
    prog.objective.assign(2 * k, 1.0);
    prog.constraints = Matrix(2 * q, 2 * k, 0.0);
    prog.rhs.resize(2 * q);
    prog.senses.assign(2 * q, lp::Sense::LessEqual);
    for (std::size_t c = 0; c < q; ++c) {
        for (std::size_t j = 0; j < k; ++j) {
            const double mjc = M(j, c);
            prog.constraints(c, j) = mjc - slope;
            prog.constraints(c, k + j) = -mjc - slope;
            prog.constraints(q + c, j) = -mjc - slope;
            prog.constraints(q + c, k + j) = mjc - slope;
        }
        prog.rhs[c] = intercept + r[c];
        prog.rhs[q + c] = intercept - r[c];
    }
    const lp::LpSolution sol = lp::solve_lp(prog);
    RowLpResult out;
    if (sol.status != lp::LpStatus::Optimal) return out;
    out.feasible = true;
    out.x.resize(k);
    for (std::size_t j = 0; j < k; ++j) out.x[j] = sol.x[j] - sol.x[k + j];
    return out;
}

double max_abs_entry(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::fabs(v));
    return m;
}

double max_row_l1(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) acc += std::fabs(a(i, j));
        m = std::max(m, acc);
    }
    return m;
}

double max_row_l1_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("remainder_bounds: matrix dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) acc += std::fabs(a(i, j) - b(i, j));
        m = std::max(m, acc);
    }
    return m;
}

}  // namespace

GmmPlugins plugin_G_Omega(const rmd::ScoreModel& score, const Vector& theta_hat) {
    GmmPlugins pl;
    pl.G_hat = score.jacobian(theta_hat);
    const Matrix g = score.scores(theta_hat);  // n x m
    const std::size_t n = g.rows;
    const std::size_t m = g.cols;
    pl.Omega_hat = Matrix(m, m, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &g.data[i * m];
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b)
                pl.Omega_hat(a, b) += row[a] * row[b] * inv_n;
    }
    // Symmetrize exactly.
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < a; ++b) pl.Omega_hat(a, b) = pl.Omega_hat(b, a);
    return pl;
}

namespace {

GammaEstimate gamma_rows(const GmmPlugins& plugins, const Vector& penalties,
                         double slope, double intercept_extra) {
    const std::size_t m = plugins.G_hat.rows;
    const std::size_t p = plugins.G_hat.cols;
    GammaEstimate est;
    est.gamma_hat = Matrix(p, m, 0.0);
    est.penalties = penalties;
    est.row_status.assign(p, RowStatus::Optimal);
    Vector target(m);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t c = 0; c < m; ++c) target[c] = plugins.G_hat(c, j);
        const double intercept =
            penalties.empty() ? intercept_extra : penalties[j];
        const RowLpResult row = solve_row_lp(plugins.Omega_hat, target, slope, intercept);
        if (!row.feasible) {
            est.row_status[j] = RowStatus::Infeasible;
            continue;  // zero fallback row
        }
        for (std::size_t c = 0; c < m; ++c) est.gamma_hat(j, c) = row.x[c];
    }
    return est;
}

}  // namespace

GammaEstimate estimate_gamma(const GmmPlugins& plugins, const Vector& penalties) {
    if (penalties.size() != plugins.G_hat.cols)
        throw std::invalid_argument("estimate_gamma: one penalty per parameter required");
    for (double l : penalties)
        if (l < 0.0) throw std::invalid_argument("estimate_gamma: penalties must be >= 0");
    return gamma_rows(plugins, penalties, 0.0, 0.0);
}

GammaEstimate estimate_gamma_adaptive(const GmmPlugins& plugins, std::size_t n,
                                      double l_omega, double l_g) {
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    GammaEstimate est =
        gamma_rows(plugins, Vector{}, l_omega * inv_sqrt_n, l_g * inv_sqrt_n);
    est.penalties.assign(plugins.G_hat.cols, l_g * inv_sqrt_n);
    return est;
}

namespace {

MuEstimate mu_rows(const GammaEstimate& gamma, const GmmPlugins& plugins,
                   const Vector& penalties, double slope, double intercept_extra) {
    const Matrix gram = mat_mul(gamma.gamma_hat, plugins.G_hat);  // p x p
    const std::size_t p = gram.rows;
    MuEstimate est;
    est.mu_hat = Matrix(p, p, 0.0);
    est.penalties = penalties;
    est.row_status.assign(p, RowStatus::Optimal);
    Vector target(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        std::fill(target.begin(), target.end(), 0.0);
        target[j] = 1.0;
        const double intercept = penalties.empty() ? intercept_extra : penalties[j];
        const RowLpResult row = solve_row_lp(gram, target, slope, intercept);
        if (!row.feasible) {
            est.row_status[j] = RowStatus::Infeasible;
            continue;
        }
        for (std::size_t c = 0; c < p; ++c) est.mu_hat(j, c) = row.x[c];
    }
    return est;
}

}  // namespace

MuEstimate estimate_mu(const GammaEstimate& gamma, const GmmPlugins& plugins,
                       const Vector& penalties) {
    if (penalties.size() != plugins.G_hat.cols)
        throw std::invalid_argument("estimate_mu: one penalty per parameter required");
    for (double l : penalties)
        if (l < 0.0) throw std::invalid_argument("estimate_mu: penalties must be >= 0");
    return mu_rows(gamma, plugins, penalties, 0.0, 0.0);
}

MuEstimate estimate_mu_adaptive(const GammaEstimate& gamma, const GmmPlugins& plugins,
                                std::size_t n, double l_gram, double l_e) {
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    MuEstimate est = mu_rows(gamma, plugins, Vector{}, l_gram * inv_sqrt_n,
                             l_e * inv_sqrt_n);
    est.penalties.assign(plugins.G_hat.cols, l_e * inv_sqrt_n);
    return est;
}

Vector debias(const Vector& theta_hat, const MuEstimate& mu, const GammaEstimate& gamma,
              const Vector& g_hat_at_theta) {
    const Vector gg = mat_vec(gamma.gamma_hat, g_hat_at_theta);  // length p
    const Vector correction = mat_vec(mu.mu_hat, gg);
    if (correction.size() != theta_hat.size())
        throw std::invalid_argument("debias: dimension mismatch");
    Vector out(theta_hat.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = theta_hat[j] - correction[j];
    return out;
}

Matrix asymptotic_variance(const Matrix& G, const Matrix& Omega) {
    if (Omega.rows != Omega.cols || G.rows != Omega.rows)
        throw std::invalid_argument("asymptotic_variance: dimension mismatch");
    const std::size_t m = Omega.rows;
    double trace = 0.0;
    for (std::size_t i = 0; i < m; ++i) trace += Omega(i, i);
    const double eps = 1e-10 * trace / static_cast<double>(m);
    Matrix omega_r = Omega;
    for (std::size_t i = 0; i < m; ++i) omega_r(i, i) += eps;
    const Matrix omega_inv = invert(omega_r);
    const Matrix gt = transpose(G);
    Matrix inner = mat_mul(mat_mul(gt, omega_inv), G);  // p x p
    double trace_inner = 0.0;
    for (std::size_t i = 0; i < inner.rows; ++i) trace_inner += inner(i, i);
    const double eps2 = 1e-10 * trace_inner / static_cast<double>(inner.rows);
    for (std::size_t i = 0; i < inner.rows; ++i) inner(i, i) += eps2;
    return invert(inner);
}

double default_penalty(std::size_t n, std::size_t p, std::size_t m, double c) {
    if (n < 1 || p < 1 || m < 1)
        throw std::invalid_argument("default_penalty: dimensions must be >= 1");
    const double tail =
        1.0 / (static_cast<double>(p) * static_cast<double>(m) * static_cast<double>(n));
    return c * std_normal_quantile(1.0 - tail) / std::sqrt(static_cast<double>(n));
}

DrgmmResult drgmm_pipeline(const rmd::ScoreModel& score, const DrgmmOptions& opts) {
    DrgmmResult res;
    Vector theta_init =
        opts.theta_init.empty() ? Vector(score.p, 0.0) : opts.theta_init;
    const rmd::RmdResult first = rmd::rmd_nonlinear(score, opts.rmd_cfg, theta_init);
    res.rmd_status = first.status;
    if (first.status == rmd::RmdStatus::Infeasible) {
        res.theta_hat = Vector(score.p, 0.0);
        res.warnings.push_back("first-stage RMD infeasible; using theta_hat = 0");
    } else {
        res.theta_hat = first.theta_hat;
        if (first.status == rmd::RmdStatus::MaxIterations)
            res.warnings.push_back("first-stage RMD hit the outer iteration cap");
    }

    const GmmPlugins plugins = plugin_G_Omega(score, res.theta_hat);
    res.gamma = estimate_gamma(plugins, opts.gamma_penalties);
    for (std::size_t j = 0; j < res.gamma.row_status.size(); ++j)
        if (res.gamma.row_status[j] == RowStatus::Infeasible)
            res.warnings.push_back("gamma row " + std::to_string(j) +
                                   " infeasible; zero fallback");
    res.mu = estimate_mu(res.gamma, plugins, opts.mu_penalties);
    for (std::size_t j = 0; j < res.mu.row_status.size(); ++j)
        if (res.mu.row_status[j] == RowStatus::Infeasible)
            res.warnings.push_back("mu row " + std::to_string(j) +
                                   " infeasible; zero fallback");

    const Vector g_hat = score.g_hat(res.theta_hat);
    res.theta_check = debias(res.theta_hat, res.mu, res.gamma, g_hat);

    // Influence scores Z_i = mu gamma g(X_i, theta_hat), laid out n x p.
    const Matrix g_obs = score.scores(res.theta_hat);              // n x m
    const Matrix proj = mat_mul(res.mu.mu_hat, res.gamma.gamma_hat);  // p x m
    res.scores = mat_mul(g_obs, transpose(proj));                  // n x p
    res.V_hat = asymptotic_variance(plugins.G_hat, plugins.Omega_hat);
    return res;
}

RemainderReport remainder_bounds(const MuEstimate& mu, const GammaEstimate& gamma,
                                 const Matrix& G_hat, const Matrix& G_tilde,
                                 const Vector& theta_hat, const Vector& theta0,
                                 const Vector& g_hat_at_theta0, const Matrix& gamma0,
                                 const Matrix& mu0, std::size_t n) {
    if (theta_hat.size() != theta0.size())
        throw std::invalid_argument("remainder_bounds: theta dimension mismatch");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double theta_l1 = 0.0;
    for (std::size_t j = 0; j < theta0.size(); ++j)
        theta_l1 += std::fabs(theta_hat[j] - theta0[j]);

    const Matrix proj = mat_mul(mu.mu_hat, gamma.gamma_hat);  // p x m
    Matrix residual = mat_mul(proj, G_hat);                   // p x p
    for (std::size_t i = 0; i < residual.rows; ++i) residual(i, i) -= 1.0;

    RemainderReport rep;
    rep.r1_bar = sqrt_n * max_abs_entry(residual) * theta_l1;
    rep.r2_bar = sqrt_n * max_row_l1(mu.mu_hat) * max_row_l1(gamma.gamma_hat) *
                 max_abs_entry([&] {
                     Matrix d = G_hat;
                     for (std::size_t i = 0; i < d.data.size(); ++i)
                         d.data[i] -= G_tilde.data[i];
                     return d;
                 }()) *
                 theta_l1;
    const double score_sup = sqrt_n * norm(g_hat_at_theta0, NormKind::LInf);
    rep.r3_bar = max_row_l1(mu.mu_hat) * max_row_l1_diff(gamma.gamma_hat, gamma0) *
                     score_sup +
                 max_row_l1_diff(mu.mu_hat, mu0) * max_row_l1(gamma0) * score_sup;
    return rep;
}

OrthogonalScoreStat orthogonal_score(const Matrix& xi, const GmmPlugins& plugins,
                                     const MuEstimate& mu, const GammaEstimate& gamma,
                                     const Vector& g_hat_alpha_theta, std::size_t n) {
    if (xi.cols != plugins.G_hat.rows)
        throw std::invalid_argument("orthogonal_score: xi column count must equal m");
    if (g_hat_alpha_theta.size() != xi.cols)
        throw std::invalid_argument("orthogonal_score: score vector length must equal m");
    // A = xi - xi G mu gamma, a p' x m matrix.
    const Matrix xg = mat_mul(xi, plugins.G_hat);       // p' x p
    const Matrix xgm = mat_mul(xg, mu.mu_hat);          // p' x p
    const Matrix xgmg = mat_mul(xgm, gamma.gamma_hat);  // p' x m
    Matrix a = xi;
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] -= xgmg.data[i];

    OrthogonalScoreStat out;
    out.statistic = mat_vec(a, g_hat_alpha_theta);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (double& v : out.statistic) v *= sqrt_n;
    out.V_M_hat = mat_mul(mat_mul(a, plugins.Omega_hat), transpose(a));
    return out;
}

}  // namespace hdinfer::drgmm
