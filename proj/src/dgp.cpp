#include "hdinfer/dgp.hpp"

#include <cmath>
#include <stdexcept>

namespace hdinfer::dgp {

MamDataset figure1_dgp(std::size_t n, std::size_t p, std::uint64_t seed,
                       std::uint64_t design_seed) {
    if (n < 1 || p < 1) throw std::invalid_argument("figure1_dgp: n, p must be >= 1");
    // The design is a non-stochastic ingredient: drawn from its own stream so
    // it stays constant while the noise seed varies across replications.
    Rng design_rng = Rng(design_seed).fork(0x66697831);  // tag: "fig1" design stream
    Matrix w(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) w(i, j) = design_rng.uniform();

    Rng noise_rng = Rng(seed).fork(0x66697832);
    Vector eps(n);
    for (std::size_t i = 0; i < n; ++i) eps[i] = noise_rng.student_t4();

    MamDataset out;
    out.theta0.assign(p, 0.0);
    out.problem.influence = Matrix(n, p);
    out.problem.theta_hat.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double z = w(i, j) * eps[i];
            out.problem.influence(i, j) = z;
            out.problem.theta_hat[j] += z;
        }
    for (double& t : out.problem.theta_hat) t /= static_cast<double>(n);
    return out;
}

namespace {

Matrix gaussian_design(std::size_t n, std::size_t p, DesignKind design, double rho,
                       Rng& rng) {
    Matrix w(n, p);
    if (design == DesignKind::IdentityCov || rho == 0.0) {
        for (double& v : w.data) v = rng.normal();
        return w;
    }
    // Toeplitz(rho) covariance via the AR(1) innovation recursion.
    const double scale = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        double prev = rng.normal();
        w(i, 0) = prev;
        for (std::size_t j = 1; j < p; ++j) {
            prev = rho * prev + scale * rng.normal();
            w(i, j) = prev;
        }
    }
    return w;
}

}  // namespace

RegressionDataset sparse_linear_dgp(std::size_t n, std::size_t p,
                                    const regularized_means::SparsityModel& model,
                                    double sigma, DesignKind design, double rho,
                                    std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("sparse_linear_dgp: sigma must be >= 0");
    Rng rng = Rng(seed).fork(0x736c696e);
    RegressionDataset out;
    Rng theta_rng = rng.fork(1);
    out.theta0 = regularized_means::generate_sparse_vector(model, p, theta_rng);
    Rng design_rng = rng.fork(2);
    out.W = gaussian_design(n, p, design, rho, design_rng);
    Rng noise_rng = rng.fork(3);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < p; ++j) mean += out.W(i, j) * out.theta0[j];
        out.y[i] = mean + sigma * noise_rng.normal();
    }
    return out;
}

RegressionDataset homoskedastic_iv_dgp(std::size_t n, std::size_t p, std::size_t m,
                                       std::size_t s, double sigma, double pi,
                                       std::uint64_t seed) {
    if (s > p) throw std::invalid_argument("homoskedastic_iv_dgp: s must be <= p");
    Rng rng = Rng(seed).fork(0x69766476);
    RegressionDataset out;
    // theta0: s leading coordinates at unit strength.
    out.theta0.assign(p, 0.0);
    for (std::size_t j = 0; j < s; ++j) out.theta0[j] = 1.0;

    Rng z_rng = rng.fork(1);
    out.Z = Matrix(n, m);
    for (double& v : out.Z.data) v = z_rng.normal();

    // First stage: regressor j loads on instrument j with strength pi, plus
    // an independent disturbance.
    Rng v_rng = rng.fork(2);
    out.W = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double instrument = (j < m) ? out.Z(i, j) : 0.0;
            out.W(i, j) = pi * instrument + v_rng.normal();
        }

    Rng e_rng = rng.fork(3);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < p; ++j) mean += out.W(i, j) * out.theta0[j];
        out.y[i] = mean + sigma * e_rng.normal();
    }
    return out;
}

RegressionDataset logistic_dgp(std::size_t n, std::size_t p,
                               const regularized_means::SparsityModel& model,
                               std::uint64_t seed) {
    Rng rng = Rng(seed).fork(0x6c6f6769);
    RegressionDataset out;
    Rng theta_rng = rng.fork(1);
    out.theta0 = regularized_means::generate_sparse_vector(model, p, theta_rng);
    Rng design_rng = rng.fork(2);
    out.W = gaussian_design(n, p, DesignKind::IdentityCov, 0.0, design_rng);
    Rng y_rng = rng.fork(3);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double index = 0.0;
        for (std::size_t j = 0; j < p; ++j) index += out.W(i, j) * out.theta0[j];
        const double prob = 1.0 / (1.0 + std::exp(-index));
        out.y[i] = (y_rng.uniform() < prob) ? 1.0 : 0.0;
    }
    return out;
}

RctDataset rct_outcomes_dgp(std::size_t n, std::size_t p, double gamma,
                            const Vector& effects, std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("rct_outcomes_dgp: gamma must lie in (0,1)");
    if (effects.size() != p)
        throw std::invalid_argument("rct_outcomes_dgp: one effect per outcome required");
    Rng rng = Rng(seed).fork(0x72637431);
    RctDataset out;
    out.gamma = gamma;
    out.theta0 = effects;
    out.treated.resize(n);
    Matrix y(n, p);
    Rng d_rng = rng.fork(1);
    Rng y_rng = rng.fork(2);
    for (std::size_t i = 0; i < n; ++i) {
        out.treated[i] = (d_rng.uniform() < gamma) ? 1.0 : 0.0;
        for (std::size_t j = 0; j < p; ++j)
            y(i, j) = out.treated[i] * effects[j] + y_rng.normal();
    }

    // Sample group means stand in for the conditional expectations.
    Vector mean1(p, 0.0), mean0(p, 0.0);
    double n1 = 0.0, n0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.treated[i] > 0.5) {
            n1 += 1.0;
            for (std::size_t j = 0; j < p; ++j) mean1[j] += y(i, j);
        } else {
            n0 += 1.0;
            for (std::size_t j = 0; j < p; ++j) mean0[j] += y(i, j);
        }
    }
    if (n1 == 0.0 || n0 == 0.0)
        throw std::runtime_error("rct_outcomes_dgp: a treatment arm is empty");
    for (std::size_t j = 0; j < p; ++j) {
        mean1[j] /= n1;
        mean0[j] /= n0;
    }

    out.problem.influence = Matrix(n, p);
    out.problem.theta_hat.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = out.treated[i];
        for (std::size_t j = 0; j < p; ++j) {
            const double arm1 = d * y(i, j) / gamma - mean1[j];
            const double arm0 = (1.0 - d) * y(i, j) / (1.0 - gamma) - mean0[j];
            out.problem.influence(i, j) = arm1 - arm0;
            out.problem.theta_hat[j] +=
                d * y(i, j) / gamma - (1.0 - d) * y(i, j) / (1.0 - gamma);
        }
    }
    for (double& t : out.problem.theta_hat) t /= static_cast<double>(n);
    return out;
}

MamDataset means_model_dgp(std::size_t n, std::size_t p, std::size_t signal_count,
                           double strength, std::uint64_t seed) {
    if (signal_count > p)
        throw std::invalid_argument("means_model_dgp: signal_count must be <= p");
    Rng rng = Rng(seed).fork(0x6d656d64);
    MamDataset out;
    out.theta0.assign(p, 0.0);
    const double separation =
        strength * 2.0 * std::sqrt(std::log(static_cast<double>(p))) /
        std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < signal_count; ++j) out.theta0[j] = separation;

    Matrix x(n, p);
    out.problem.theta_hat.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            x(i, j) = out.theta0[j] + rng.normal();
            out.problem.theta_hat[j] += x(i, j);
        }
    for (double& t : out.problem.theta_hat) t /= static_cast<double>(n);
    out.problem.influence = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            out.problem.influence(i, j) = x(i, j) - out.problem.theta_hat[j];
    return out;
}

}  // namespace hdinfer::dgp
