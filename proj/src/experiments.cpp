#include "hdinfer/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hdinfer/bootstrap.hpp"
#include "hdinfer/dgp.hpp"
#include "hdinfer/drgmm.hpp"
#include "hdinfer/mam.hpp"
#include "hdinfer/multiple_testing.hpp"
#include "hdinfer/regularized_means.hpp"
#include "hdinfer/rmd.hpp"
#include "hdinfer/simultaneous_ci.hpp"

namespace hdinfer::experiments {

namespace mt = hdinfer::multiple_testing;

ExperimentKind parse_kind(const std::string& name) {
    if (name == "pp_data") return ExperimentKind::PpData;
    if (name == "coverage") return ExperimentKind::Coverage;
    if (name == "fwer") return ExperimentKind::Fwer;
    if (name == "fdr") return ExperimentKind::Fdr;
    if (name == "rmd_rates") return ExperimentKind::RmdRates;
    if (name == "drgmm_inference") return ExperimentKind::DrgmmInference;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::PpData: return "pp_data";
        case ExperimentKind::Coverage: return "coverage";
        case ExperimentKind::Fwer: return "fwer";
        case ExperimentKind::Fdr: return "fdr";
        case ExperimentKind::RmdRates: return "rmd_rates";
        case ExperimentKind::DrgmmInference: return "drgmm_inference";
    }
    throw std::logic_error("kind_name: unknown kind");
}

Vector ReplicationTable::means() const {
    Vector out(columns.size(), 0.0);
    for (const Vector& row : rows)
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += row[c];
    for (double& v : out) v /= static_cast<double>(rows.size());
    return out;
}

Vector ReplicationTable::standard_errors() const {
    const Vector mu = means();
    Vector out(columns.size(), 0.0);
    if (rows.size() < 2) return out;
    for (const Vector& row : rows)
        for (std::size_t c = 0; c < out.size(); ++c) {
            const double d = row[c] - mu[c];
            out[c] += d * d;
        }
    const double denom = static_cast<double>(rows.size()) *
                         static_cast<double>(rows.size() - 1);
    for (double& v : out) v = std::sqrt(v / denom);
    return out;
}

Vector ReplicationTable::medians() const {
    Vector out(columns.size(), 0.0);
    Vector col(rows.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (std::size_t r = 0; r < rows.size(); ++r) col[r] = rows[r][c];
        std::sort(col.begin(), col.end());
        const std::size_t k = rows.size();
        out[c] = (k % 2 == 1) ? col[k / 2] : 0.5 * (col[k / 2 - 1] + col[k / 2]);
    }
    return out;
}

std::size_t ReplicationTable::column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == name) return c;
    throw std::invalid_argument("ReplicationTable: no column named " + name);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t rep) {
    return Rng(master).fork(rep + 1).next_u64();
}

// Run fn(rep) for rep in [0, count); rows are written by index so the
// aggregate never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, threads);
    if (threads == 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t r = t; r < count; r += threads) fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string band_csv(const simultaneous_ci::SimultaneousBand& band,
                     const Vector& theta_hat) {
    std::string csv = "j,theta_hat,lower,upper,radius\n";
    for (std::size_t j = 0; j < theta_hat.size(); ++j) {
        const double radius = 0.5 * (band.upper[j] - band.lower[j]);
        csv += std::to_string(j) + "," + fmt(theta_hat[j]) + "," + fmt(band.lower[j]) +
               "," + fmt(band.upper[j]) + "," + fmt(radius) + "\n";
    }
    return csv;
}

std::string decisions_csv(const mam::TStats& t, const mt::FwerResult& bonf,
                          const mt::FwerResult& holm, const mt::FwerResult& rw,
                          const mt::FdrResult& bh) {
    std::string csv = "j,t,rejected_bonf,rejected_holm,rejected_rw,rejected_bh\n";
    for (std::size_t j = 0; j < t.values.size(); ++j) {
        csv += std::to_string(j) + "," + fmt(t.values[j]) + "," +
               std::to_string(bonf.rejected.count(j)) + "," +
               std::to_string(holm.rejected.count(j)) + "," +
               std::to_string(rw.rejected.count(j)) + "," +
               std::to_string(bh.rejected.count(j)) + "\n";
    }
    return csv;
}

simultaneous_ci::WeightMode parse_weight_mode(const std::string& mode) {
    if (mode == "unit") return simultaneous_ci::WeightMode::Unit;
    if (mode == "inv_sd") return simultaneous_ci::WeightMode::InvSd;
    throw std::invalid_argument("unknown weight_mode: " + mode);
}

// ---- coverage -------------------------------------------------------------

ExperimentResult run_coverage(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"covered_boot", "covered_md",   "lambda_hat",
                         "sigma_bar",    "bound",        "bound_holds",
                         "md_ge_lambda"};
    res.table.rows.assign(cfg.replications, Vector());
    const auto weight_mode = parse_weight_mode(cfg.weight_mode);

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        const dgp::MamDataset data = dgp::figure1_dgp(cfg.n, cfg.p, rep_seed, cfg.seed);
        bootstrap::BootstrapConfig bcfg;
        bcfg.scheme = bootstrap::Scheme::Gaussian;
        bcfg.B = cfg.B;
        bcfg.seed = Rng(rep_seed).fork(0xb007).next_u64();
        const auto band = simultaneous_ci::simultaneous_intervals(
            data.problem, cfg.alpha, weight_mode, bcfg);
        const auto md_band =
            simultaneous_ci::simultaneous_intervals_md(data.problem, cfg.alpha);

        // Quantile-comparison audit on the unit-weight statistic.
        double lambda_unit = band.lambda_used;
        if (weight_mode != simultaneous_ci::WeightMode::Unit) {
            const Vector unit(cfg.p, 1.0);
            lambda_unit = bootstrap::lambda_hat(
                bootstrap::gaussian_bootstrap_sup(data.problem, unit, bcfg), cfg.alpha);
        }
        const Vector scale = mam::influence_scale(data.problem);
        const double sigma_bar = *std::max_element(scale.begin(), scale.end());
        const double bound =
            bootstrap::gaussian_quantile_bound(sigma_bar, cfg.p, cfg.alpha);

        // Maximal weighted MD radius equals the moderate-deviation critical
        // value times sigma_bar under unit weights.
        const double md_max_weighted =
            std_normal_quantile(1.0 - cfg.alpha / (2.0 * static_cast<double>(cfg.p))) *
            sigma_bar;

        res.table.rows[r] = {band.covers(data.theta0) ? 1.0 : 0.0,
                             md_band.covers(data.theta0) ? 1.0 : 0.0,
                             lambda_unit,
                             sigma_bar,
                             bound,
                             lambda_unit <= bound ? 1.0 : 0.0,
                             md_max_weighted >= lambda_unit ? 1.0 : 0.0};
        if (r == 0) res.bands_csv = band_csv(band, data.problem.theta_hat);
    });
    return res;
}

// ---- fwer -----------------------------------------------------------------

ExperimentResult run_fwer(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"false_rej_bonf", "false_rej_holm", "false_rej_rw",
                         "nesting_ok",     "rej_bonf",       "rej_holm",
                         "rej_rw",         "true_rej_holm",  "true_rej_rw"};
    res.table.rows.assign(cfg.replications, Vector());

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        dgp::MamDataset data =
            (cfg.signal_count == 0)
                ? dgp::figure1_dgp(cfg.n, cfg.p, rep_seed, cfg.seed)
                : dgp::means_model_dgp(cfg.n, cfg.p, cfg.signal_count,
                                       cfg.signal_strength, rep_seed);
        const Vector zeros(cfg.p, 0.0);
        const mam::TStats t = mam::t_statistics(data.problem, zeros);
        const auto bonf = mt::bonferroni(t, cfg.alpha);
        const auto holm = mt::holm_stepdown(t, cfg.alpha);
        bootstrap::BootstrapConfig bcfg;
        bcfg.scheme = bootstrap::Scheme::Gaussian;
        bcfg.B = cfg.B;
        bcfg.seed = Rng(rep_seed).fork(0xb007).next_u64();
        const auto rw = mt::romano_wolf_stepdown(data.problem, zeros, cfg.alpha, bcfg);

        auto tally = [&](const std::set<std::size_t>& rejected) {
            double false_rej = 0.0, true_rej = 0.0;
            for (std::size_t j : rejected)
                (data.theta0[j] == 0.0 ? false_rej : true_rej) += 1.0;
            return std::pair{false_rej, true_rej};
        };
        const auto [fb, tb] = tally(bonf.rejected);
        const auto [fh, th] = tally(holm.rejected);
        const auto [fr, tr] = tally(rw.rejected);
        const bool nested = std::includes(holm.rejected.begin(), holm.rejected.end(),
                                          bonf.rejected.begin(), bonf.rejected.end());
        res.table.rows[r] = {fb > 0.0 ? 1.0 : 0.0,
                             fh > 0.0 ? 1.0 : 0.0,
                             fr > 0.0 ? 1.0 : 0.0,
                             nested ? 1.0 : 0.0,
                             static_cast<double>(bonf.rejected.size()),
                             static_cast<double>(holm.rejected.size()),
                             static_cast<double>(rw.rejected.size()),
                             th,
                             tr};
        (void)tb;
        if (r == 0) {
            const auto bh = mt::benjamini_hochberg(t, cfg.alpha);
            res.decisions_csv = decisions_csv(t, bonf, holm, rw, bh);
        }
    });
    return res;
}

// ---- fdr ------------------------------------------------------------------

ExperimentResult run_fdr(const ExperimentConfig& cfg) {
    if (cfg.signal_count == 0)
        throw std::invalid_argument("fdr experiment requires signal_count >= 1");
    ExperimentResult res;
    res.table.columns = {"fdr_bh", "power_bh", "power_holm", "rejections_bh"};
    res.table.rows.assign(cfg.replications, Vector());

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        const dgp::MamDataset data = dgp::means_model_dgp(
            cfg.n, cfg.p, cfg.signal_count, cfg.signal_strength, rep_seed);
        const Vector zeros(cfg.p, 0.0);
        const mam::TStats t = mam::t_statistics(data.problem, zeros);
        const auto bh = mt::benjamini_hochberg(t, cfg.alpha);
        const auto holm = mt::holm_stepdown(t, cfg.alpha);

        double false_bh = 0.0, true_bh = 0.0;
        for (std::size_t j : bh.rejected)
            (data.theta0[j] == 0.0 ? false_bh : true_bh) += 1.0;
        double true_holm = 0.0;
        for (std::size_t j : holm.rejected)
            if (data.theta0[j] != 0.0) true_holm += 1.0;

        const double total = static_cast<double>(bh.rejected.size());
        const double signals = static_cast<double>(cfg.signal_count);
        res.table.rows[r] = {total > 0.0 ? false_bh / total : 0.0, true_bh / signals,
                             true_holm / signals, total};
        if (r == 0) {
            const auto bonf = mt::bonferroni(t, cfg.alpha);
            bootstrap::BootstrapConfig bcfg;
            bcfg.scheme = bootstrap::Scheme::Gaussian;
            bcfg.B = cfg.B;
            bcfg.seed = Rng(rep_seed).fork(0xb007).next_u64();
            const auto rw =
                mt::romano_wolf_stepdown(data.problem, zeros, cfg.alpha, bcfg);
            res.decisions_csv = decisions_csv(t, bonf, holm, rw, bh);
        }
    });
    return res;
}

// ---- rmd_rates ------------------------------------------------------------

// Penalty level from the oracle bootstrap of ||g_hat(theta0)||_inf: the
// influence rows are the per-observation moment values at the truth.
double oracle_moment_lambda(const Matrix& instruments, const Vector& residuals,
                            double alpha, std::size_t B, std::uint64_t seed) {
    const std::size_t n = instruments.rows;
    const std::size_t m = instruments.cols;
    mam::MamProblem prob;
    prob.influence = Matrix(n, m);
    prob.theta_hat.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
            prob.influence(i, k) = residuals[i] * instruments(i, k);
    bootstrap::BootstrapConfig bcfg;
    bcfg.scheme = bootstrap::Scheme::Gaussian;
    bcfg.B = B;
    bcfg.seed = seed;
    const Vector unit(m, 1.0);
    const auto draws = bootstrap::gaussian_bootstrap_sup(prob, unit, bcfg);
    return bootstrap::lambda_hat(draws, alpha) / std::sqrt(static_cast<double>(n));
}

ExperimentResult run_rmd_rates(const ExperimentConfig& cfg) {
    if (cfg.s == 0) throw std::invalid_argument("rmd_rates requires s >= 1");
    ExperimentResult res;
    res.table.columns = {"l2_error", "l1_error", "support_ok", "lambda", "infeasible"};
    res.table.rows.assign(cfg.replications, Vector());
    std::mutex warn_mutex;

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        const auto model = regularized_means::SparsityModel::exactly_sparse(cfg.s);
        const dgp::RegressionDataset data =
            dgp::sparse_linear_dgp(cfg.n, cfg.p, model, cfg.sigma,
                                   dgp::DesignKind::IdentityCov, 0.0, rep_seed);
        Vector residuals(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) {
            double mean = 0.0;
            for (std::size_t j = 0; j < cfg.p; ++j)
                mean += data.W(i, j) * data.theta0[j];
            residuals[i] = data.y[i] - mean;
        }
        const double lambda =
            oracle_moment_lambda(data.W, residuals, cfg.alpha, cfg.B,
                                 Rng(rep_seed).fork(0x1a).next_u64());
        const rmd::RmdResult fit = rmd::dantzig_regression(data.W, data.y, lambda);
        Vector theta = fit.theta_hat;
        double infeasible = 0.0;
        if (fit.status != rmd::RmdStatus::Optimal) {
            theta.assign(cfg.p, 0.0);
            infeasible = 1.0;
            std::lock_guard<std::mutex> lock(warn_mutex);
            res.warnings.push_back("replication " + std::to_string(r) +
                                   ": RMD infeasible, theta set to zero");
        }
        double l2 = 0.0, l1 = 0.0;
        bool support_ok = true;
        for (std::size_t j = 0; j < cfg.p; ++j) {
            const double d = theta[j] - data.theta0[j];
            l2 += d * d;
            l1 += std::fabs(d);
            if (data.theta0[j] != 0.0 && std::fabs(theta[j]) < 1e-10) support_ok = false;
        }
        res.table.rows[r] = {std::sqrt(l2), l1, support_ok ? 1.0 : 0.0, lambda,
                             infeasible};
    });
    return res;
}

// ---- drgmm_inference -------------------------------------------------------

ExperimentResult run_drgmm_inference(const ExperimentConfig& cfg) {
    if (cfg.m == 0 || cfg.s == 0)
        throw std::invalid_argument("drgmm_inference requires m >= 1 and s >= 1");
    ExperimentResult res;
    res.table.columns.clear();
    for (std::size_t j = 0; j < cfg.p; ++j)
        res.table.columns.push_back("cover_" + std::to_string(j));
    res.table.columns.insert(res.table.columns.end(),
                             {"simult_cover", "r1_bar", "r2_bar", "r3_bar",
                              "abs_err_check", "abs_err_rmd", "infeasible"});
    res.table.rows.assign(cfg.replications, Vector());
    std::mutex warn_mutex;
    const double z975 = std_normal_quantile(0.975);

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        const dgp::RegressionDataset data = dgp::homoskedastic_iv_dgp(
            cfg.n, cfg.p, cfg.m, cfg.s, cfg.sigma, cfg.pi, rep_seed);
        const std::size_t n = cfg.n, p = cfg.p, m = cfg.m;

        // Empirical moments of the linear IV score g_i = (y_i - W_i'theta) Z_i.
        Matrix G_hat(m, p, 0.0);
        Vector g0_hat(m, 0.0);
        Matrix omega_z(m, m, 0.0);  // E_n[Z Z'] (homoskedastic shortcut)
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                const double zik = data.Z(i, k);
                g0_hat[k] += zik * data.y[i] * inv_n;
                for (std::size_t j = 0; j < p; ++j)
                    G_hat(k, j) -= zik * data.W(i, j) * inv_n;
                for (std::size_t l = k; l < m; ++l)
                    omega_z(k, l) += zik * data.Z(i, l) * inv_n;
            }
        }
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < k; ++l) omega_z(k, l) = omega_z(l, k);

        // First stage: RMD with the oracle bootstrap penalty.
        Vector residuals0(n);
        for (std::size_t i = 0; i < n; ++i) {
            double mean = 0.0;
            for (std::size_t j = 0; j < p; ++j) mean += data.W(i, j) * data.theta0[j];
            residuals0[i] = data.y[i] - mean;
        }
        const double lambda_rmd =
            oracle_moment_lambda(data.Z, residuals0, 0.1, 300,
                                 Rng(rep_seed).fork(0x1b).next_u64());
        const rmd::RmdResult first = rmd::iv_rmd(data.Z, data.W, data.y, lambda_rmd);
        Vector theta_hat = first.theta_hat;
        double infeasible = 0.0;
        if (first.status != rmd::RmdStatus::Optimal) {
            theta_hat.assign(p, 0.0);
            infeasible = 1.0;
            std::lock_guard<std::mutex> lock(warn_mutex);
            res.warnings.push_back("replication " + std::to_string(r) +
                                   ": first-stage RMD infeasible");
        }

        const double lambda_bar =
            drgmm::default_penalty(n, p, m, cfg.penalty_scale);
        drgmm::GmmPlugins plugins{G_hat, omega_z};
        const auto gamma = drgmm::estimate_gamma(plugins, Vector(p, lambda_bar));
        const auto mu = drgmm::estimate_mu(gamma, plugins, Vector(p, 2.0 * lambda_bar));

        Vector g_hat_theta = mat_vec(G_hat, theta_hat);
        for (std::size_t k = 0; k < m; ++k) g_hat_theta[k] += g0_hat[k];
        const Vector theta_check = drgmm::debias(theta_hat, mu, gamma, g_hat_theta);

        // Influence scores use the first-stage residuals.
        Matrix g_obs(n, m);
        for (std::size_t i = 0; i < n; ++i) {
            double fitted = 0.0;
            for (std::size_t j = 0; j < p; ++j) fitted += data.W(i, j) * theta_hat[j];
            const double resid = data.y[i] - fitted;
            for (std::size_t k = 0; k < m; ++k) g_obs(i, k) = resid * data.Z(i, k);
        }
        const Matrix proj = mat_mul(mu.mu_hat, gamma.gamma_hat);  // p x m
        const Matrix scores = mat_mul(g_obs, transpose(proj));    // n x p

        // Variance plug-in for the per-coordinate CIs: homoskedastic
        // Omega = sigma^2 E_n[ZZ'] with sigma^2 from the debiased fit, whose
        // residuals are not inflated by the first-stage shrinkage.
        double sigma2_check = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double fitted = 0.0;
            for (std::size_t j = 0; j < p; ++j) fitted += data.W(i, j) * theta_check[j];
            const double resid = data.y[i] - fitted;
            sigma2_check += resid * resid * inv_n;
        }
        Matrix omega_v = omega_z;
        for (double& v : omega_v.data) v *= sigma2_check;
        const Matrix V_hat = drgmm::asymptotic_variance(G_hat, omega_v);

        Vector row;
        row.reserve(res.table.columns.size());
        for (std::size_t j = 0; j < p; ++j) {
            const double half = z975 * std::sqrt(V_hat(j, j) * inv_n);
            const bool cover = std::fabs(theta_check[j] - data.theta0[j]) <= half;
            row.push_back(cover ? 1.0 : 0.0);
        }

        // Simultaneous band from bootstrapping the influence scores.
        mam::MamProblem score_prob;
        score_prob.theta_hat = theta_check;
        score_prob.influence = scores;
        bootstrap::BootstrapConfig bcfg;
        bcfg.scheme = bootstrap::Scheme::Gaussian;
        bcfg.B = cfg.B;
        bcfg.seed = Rng(rep_seed).fork(0xb007).next_u64();
        const auto band = simultaneous_ci::simultaneous_intervals(
            score_prob, cfg.alpha, simultaneous_ci::WeightMode::InvSd, bcfg);
        row.push_back(band.covers(data.theta0) ? 1.0 : 0.0);

        // Oracle moment-selection quantities for the remainder diagnostics.
        Matrix G0(m, p, 0.0);
        for (std::size_t j = 0; j < p && j < m; ++j) G0(j, j) = -cfg.pi;
        Matrix gamma0 = transpose(G0);  // G' Omega^{-1} with Omega = sigma^2 I
        const double sig2 = cfg.sigma * cfg.sigma;
        for (double& v : gamma0.data) v /= sig2;
        Matrix mu0(p, p, 0.0);
        for (std::size_t j = 0; j < p; ++j) mu0(j, j) = sig2 / (cfg.pi * cfg.pi);
        Vector g_hat_theta0(m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k)
                g_hat_theta0[k] += residuals0[i] * data.Z(i, k) * inv_n;
        const auto rem = drgmm::remainder_bounds(mu, gamma, G_hat, G_hat, theta_hat,
                                                 data.theta0, g_hat_theta0, gamma0,
                                                 mu0, n);
        row.push_back(rem.r1_bar);
        row.push_back(rem.r2_bar);
        row.push_back(rem.r3_bar);

        double err_check = 0.0, err_rmd = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            err_check += std::fabs(theta_check[j] - data.theta0[j]);
            err_rmd += std::fabs(theta_hat[j] - data.theta0[j]);
        }
        row.push_back(err_check / static_cast<double>(p));
        row.push_back(err_rmd / static_cast<double>(p));
        row.push_back(infeasible);
        res.table.rows[r] = std::move(row);
    });
    return res;
}

// ---- pp_data ---------------------------------------------------------------

ExperimentResult run_pp_data(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"sup_stat"};
    res.table.rows.assign(cfg.replications, Vector());

    // The design matrix is drawn once, exactly as in the figure's DGP.
    Rng design_rng = Rng(cfg.seed).fork(0x66697831);
    Matrix w(cfg.n, cfg.p);
    for (double& v : w.data) v = design_rng.uniform();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(cfg.n));

    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, r);
        Rng noise_rng = Rng(rep_seed).fork(0x66697832);
        Vector acc(cfg.p, 0.0);
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const double eps = noise_rng.student_t4();
            const double* row = &w.data[i * cfg.p];
            for (std::size_t j = 0; j < cfg.p; ++j) acc[j] += eps * row[j];
        }
        double sup = 0.0;
        for (double v : acc) sup = std::max(sup, std::fabs(v));
        res.table.rows[r] = {sup * inv_sqrt_n};
    });

    // Bootstrap approximations pooled over the first few replication datasets:
    // each dataset's bootstrap CDF is conditional on that draw of the data, so
    // splitting the draw budget across several datasets averages out the
    // dataset-to-dataset wobble in the curves.
    const std::size_t pool =
        std::min<std::size_t>(cfg.replications, 8);
    const std::size_t per_dataset =
        std::max<std::size_t>(1, cfg.pp_bootstrap_draws / pool);
    const Vector unit(cfg.p, 1.0);
    Vector gdraws_pooled, edraws_pooled;
    gdraws_pooled.reserve(pool * per_dataset);
    edraws_pooled.reserve(pool * per_dataset);
    for (std::size_t d = 0; d < pool; ++d) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, d);
        const dgp::MamDataset rep =
            dgp::figure1_dgp(cfg.n, cfg.p, rep_seed, cfg.seed);
        bootstrap::BootstrapConfig gcfg;
        gcfg.scheme = bootstrap::Scheme::Gaussian;
        gcfg.B = per_dataset;
        gcfg.seed = Rng(rep_seed).fork(0x9a).next_u64();
        const auto gdraws = bootstrap::gaussian_bootstrap_sup(rep.problem, unit, gcfg);
        bootstrap::BootstrapConfig ecfg = gcfg;
        ecfg.scheme = bootstrap::Scheme::Empirical;
        ecfg.seed = Rng(rep_seed).fork(0x9b).next_u64();
        const auto edraws = bootstrap::empirical_bootstrap_sup(rep.problem, unit, ecfg);
        gdraws_pooled.insert(gdraws_pooled.end(), gdraws.values.begin(),
                             gdraws.values.end());
        edraws_pooled.insert(edraws_pooled.end(), edraws.values.begin(),
                             edraws.values.end());
    }

    Vector sups(cfg.replications);
    for (std::size_t r = 0; r < cfg.replications; ++r) sups[r] = res.table.rows[r][0];
    Vector sorted = sups;
    std::sort(sorted.begin(), sorted.end());
    const double lo = empirical_quantile(sorted, 0.8);
    const double hi = sorted.back();
    const std::size_t points = std::max<std::size_t>(2, cfg.grid_points);

    auto cdf = [](const Vector& sample, double x) {
        double count = 0.0;
        for (double v : sample)
            if (v <= x) count += 1.0;
        return count / static_cast<double>(sample.size());
    };
    res.pp_curve.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double x =
            lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        res.pp_curve[k] = {x, cdf(sups, x), cdf(gdraws_pooled, x), cdf(edraws_pooled, x)};
    }
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replications < 1)
        throw std::invalid_argument("run_experiment: replications must be >= 1");
    switch (cfg.kind) {
        case ExperimentKind::PpData: return run_pp_data(cfg);
        case ExperimentKind::Coverage: return run_coverage(cfg);
        case ExperimentKind::Fwer: return run_fwer(cfg);
        case ExperimentKind::Fdr: return run_fdr(cfg);
        case ExperimentKind::RmdRates: return run_rmd_rates(cfg);
        case ExperimentKind::DrgmmInference: return run_drgmm_inference(cfg);
    }
    throw std::logic_error("run_experiment: unknown kind");
}

}  // namespace hdinfer::experiments
