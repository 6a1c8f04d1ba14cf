#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdinfer/linalg.hpp"

namespace hdinfer::experiments {

enum class ExperimentKind {
    PpData,
    Coverage,
    Fwer,
    Fdr,
    RmdRates,
    DrgmmInference,
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Coverage;
    std::size_t n = 400;
    std::size_t p = 200;
    std::size_t m = 0;           // moment count (IV experiments)
    std::size_t s = 0;           // sparsity level
    std::size_t replications = 100;
    std::size_t B = 500;         // bootstrap draws per replication
    double alpha = 0.05;
    double sigma = 1.0;
    double pi = 1.0;             // first-stage strength (IV)
    double penalty_scale = 0.5;  // c in the default DRGMM penalty
    std::string weight_mode = "inv_sd";  // unit | inv_sd
    std::size_t signal_count = 0;
    double signal_strength = 1.0;
    std::size_t pp_bootstrap_draws = 4000;
    std::size_t grid_points = 25;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

// Per-replication metric rows plus order-independent aggregates.
struct ReplicationTable {
    std::vector<std::string> columns;
    std::vector<Vector> rows;

    Vector means() const;
    Vector standard_errors() const;  // MC s.e. of the mean per column
    Vector medians() const;
    std::size_t column_index(const std::string& name) const;
};

struct PpPoint {
    double x = 0.0;
    double empirical = 0.0;
    double gaussian_boot = 0.0;
    double empirical_boot = 0.0;
};

struct ExperimentResult {
    ReplicationTable table;
    std::vector<PpPoint> pp_curve;     // pp_data only
    std::string decisions_csv;         // fwer/fdr snapshot of the first replication
    std::string bands_csv;             // coverage snapshot of the first replication
    std::vector<std::string> warnings;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace hdinfer::experiments
