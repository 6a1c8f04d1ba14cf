#pragma once

#include "hdinfer/bootstrap.hpp"
#include "hdinfer/mam.hpp"

namespace hdinfer::simultaneous_ci {

enum class WeightMode { Unit, InvSd };

enum class BandMethod { GaussianBootstrap, EmpiricalBootstrap, ModerateDeviation };

struct SimultaneousBand {
    Vector lower;
    Vector upper;
    double lambda_used = 0.0;
    Vector weights;
    BandMethod method = BandMethod::GaussianBootstrap;

    bool covers(const Vector& theta0) const;
};

// Bootstrap rectangles CS_j = [theta_hat_j -+ lambda_hat / (w_j sqrt(n))].
SimultaneousBand simultaneous_intervals(const mam::MamProblem& prob, double alpha,
                                        WeightMode weight_mode,
                                        const bootstrap::BootstrapConfig& cfg);

// Conservative rectangles with radius Phi^{-1}(1 - alpha/(2p)) (E_n Z^2)^{1/2}/sqrt(n).
SimultaneousBand simultaneous_intervals_md(const mam::MamProblem& prob, double alpha);

// Band built from precomputed sup draws (shared-draw workflows).
SimultaneousBand band_from_draws(const mam::MamProblem& prob, const Vector& weights,
                                 const bootstrap::SupDraws& draws, double alpha);

}  // namespace hdinfer::simultaneous_ci
