#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hdinfer/experiments.hpp"

using namespace hdinfer;
namespace ex = hdinfer::experiments;

namespace {

ex::ExperimentConfig small_config(ex::ExperimentKind kind) {
    ex::ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.n = 120;
    cfg.p = 12;
    cfg.m = 16;
    cfg.s = 3;
    cfg.replications = 4;
    cfg.B = 60;
    cfg.alpha = 0.1;
    cfg.seed = 17;
    cfg.pp_bootstrap_draws = 200;
    cfg.grid_points = 8;
    cfg.signal_count = 3;
    return cfg;
}

bool tables_identical(const ex::ReplicationTable& a, const ex::ReplicationTable& b) {
    if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (a.rows[i] != b.rows[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("kind names round trip") {
    for (auto kind : {ex::ExperimentKind::PpData, ex::ExperimentKind::Coverage,
                      ex::ExperimentKind::Fwer, ex::ExperimentKind::Fdr,
                      ex::ExperimentKind::RmdRates, ex::ExperimentKind::DrgmmInference})
        CHECK(ex::parse_kind(ex::kind_name(kind)) == kind);
    CHECK_THROWS_AS(ex::parse_kind("nonsense"), std::invalid_argument);
}

TEST_CASE("table aggregates match direct computation") {
    ex::ReplicationTable t;
    t.columns = {"a", "b"};
    t.rows = {{1.0, 10.0}, {2.0, 30.0}, {3.0, 20.0}};
    const auto mu = t.means();
    CHECK(mu[0] == doctest::Approx(2.0));
    CHECK(mu[1] == doctest::Approx(20.0));
    const auto med = t.medians();
    CHECK(med[0] == doctest::Approx(2.0));
    CHECK(med[1] == doctest::Approx(20.0));
    const auto se = t.standard_errors();
    // Sample sd of {1,2,3} is 1, se = 1/sqrt(3).
    CHECK(se[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(t.column_index("b") == 1);
    CHECK_THROWS_AS(t.column_index("missing"), std::invalid_argument);
}

TEST_CASE("coverage experiment smoke run") {
    const auto cfg = small_config(ex::ExperimentKind::Coverage);
    const auto res = ex::run_experiment(cfg);
    CHECK(res.table.rows.size() == cfg.replications);
    const auto cov = res.table.column_index("covered_boot");
    for (const auto& row : res.table.rows) {
        CHECK((row[cov] == 0.0 || row[cov] == 1.0));
    }
    const auto lam = res.table.column_index("lambda_hat");
    for (const auto& row : res.table.rows) CHECK(row[lam] > 0.0);
    CHECK(!res.bands_csv.empty());

    // Determinism of the whole run.
    const auto res2 = ex::run_experiment(cfg);
    CHECK(tables_identical(res.table, res2.table));
    CHECK(res.bands_csv == res2.bands_csv);
}

TEST_CASE("fwer experiment smoke run") {
    auto cfg = small_config(ex::ExperimentKind::Fwer);
    cfg.signal_count = 0;  // all nulls true
    const auto res = ex::run_experiment(cfg);
    CHECK(res.table.rows.size() == cfg.replications);
    const auto nest = res.table.column_index("nesting_ok");
    for (const auto& row : res.table.rows) CHECK(row[nest] == 1.0);
    const auto fb = res.table.column_index("false_rej_bonf");
    const auto fh = res.table.column_index("false_rej_holm");
    for (const auto& row : res.table.rows) CHECK(row[fb] <= row[fh] + 1e-12);
    CHECK(!res.decisions_csv.empty());

    // Mixed-null variant exercises the power columns.
    auto mixed = cfg;
    mixed.signal_count = 3;
    mixed.signal_strength = 2.0;
    const auto res2 = ex::run_experiment(mixed);
    const auto ph = res2.table.column_index("true_rej_holm");
    const auto pw = res2.table.column_index("true_rej_rw");
    double holm = 0.0, rw = 0.0;
    for (const auto& row : res2.table.rows) {
        holm += row[ph];
        rw += row[pw];
    }
    CHECK(rw >= holm - 1e-12);
}

TEST_CASE("fdr experiment smoke run") {
    auto cfg = small_config(ex::ExperimentKind::Fdr);
    cfg.signal_count = 4;
    cfg.signal_strength = 1.5;
    const auto res = ex::run_experiment(cfg);
    CHECK(res.table.rows.size() == cfg.replications);
    const auto fdr = res.table.column_index("fdr_bh");
    const auto pow_bh = res.table.column_index("power_bh");
    const auto pow_holm = res.table.column_index("power_holm");
    for (const auto& row : res.table.rows) {
        CHECK(row[fdr] >= 0.0);
        CHECK(row[fdr] <= 1.0);
        CHECK(row[pow_bh] >= row[pow_holm] - 1e-12);
    }
}

TEST_CASE("rmd rates experiment smoke run") {
    auto cfg = small_config(ex::ExperimentKind::RmdRates);
    cfg.p = 20;
    const auto res = ex::run_experiment(cfg);
    CHECK(res.table.rows.size() == cfg.replications);
    const auto l2 = res.table.column_index("l2_error");
    const auto lam = res.table.column_index("lambda");
    for (const auto& row : res.table.rows) {
        CHECK(row[l2] >= 0.0);
        CHECK(row[lam] > 0.0);
    }
}

TEST_CASE("drgmm inference experiment smoke run") {
    auto cfg = small_config(ex::ExperimentKind::DrgmmInference);
    cfg.n = 200;
    cfg.p = 4;
    cfg.m = 8;
    cfg.s = 2;
    cfg.replications = 2;
    cfg.B = 50;
    const auto res = ex::run_experiment(cfg);
    CHECK(res.table.rows.size() == cfg.replications);
    const auto r2 = res.table.column_index("r2_bar");
    for (const auto& row : res.table.rows) CHECK(row[r2] == 0.0);
    const auto c0 = res.table.column_index("cover_0");
    for (const auto& row : res.table.rows) CHECK((row[c0] == 0.0 || row[c0] == 1.0));
    // Deterministic rerun.
    const auto res2 = ex::run_experiment(cfg);
    CHECK(tables_identical(res.table, res2.table));
}

TEST_CASE("pp data experiment smoke run") {
    auto cfg = small_config(ex::ExperimentKind::PpData);
    cfg.p = 40;
    cfg.replications = 60;
    const auto res = ex::run_experiment(cfg);
    REQUIRE(!res.pp_curve.empty());
    CHECK(res.pp_curve.size() == cfg.grid_points);
    double prev = -1.0;
    for (const auto& pt : res.pp_curve) {
        CHECK(pt.x >= prev);
        prev = pt.x;
        for (double v : {pt.empirical, pt.gaussian_boot, pt.empirical_boot}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    // Curves are nondecreasing in x.
    for (std::size_t i = 1; i < res.pp_curve.size(); ++i) {
        CHECK(res.pp_curve[i].empirical >= res.pp_curve[i - 1].empirical - 1e-12);
        CHECK(res.pp_curve[i].gaussian_boot >= res.pp_curve[i - 1].gaussian_boot - 1e-12);
    }
    // Deterministic rerun reproduces the curve exactly.
    const auto res2 = ex::run_experiment(cfg);
    REQUIRE(res2.pp_curve.size() == res.pp_curve.size());
    for (std::size_t i = 0; i < res.pp_curve.size(); ++i) {
        CHECK(res2.pp_curve[i].x == res.pp_curve[i].x);
        CHECK(res2.pp_curve[i].empirical == res.pp_curve[i].empirical);
        CHECK(res2.pp_curve[i].gaussian_boot == res.pp_curve[i].gaussian_boot);
        CHECK(res2.pp_curve[i].empirical_boot == res.pp_curve[i].empirical_boot);
    }
}
