#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdinfer/experiments.hpp"

namespace {

using nlohmann::json;
namespace ex = hdinfer::experiments;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ParsedConfig {
    ex::ExperimentConfig cfg;
    json echo;
};

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
    throw std::runtime_error("config field '" + field + "': " + what);
}

template <typename T>
T require_field(const json& obj, const std::string& key, const std::string& scope) {
    if (!obj.contains(key)) config_error(scope + key, "missing");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(scope + key, e.what());
    }
}

template <typename T>
T optional_field(const json& obj, const std::string& key, T fallback,
                 const std::string& scope) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(scope + key, e.what());
    }
}

ParsedConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
    }
    const int version = optional_field<int>(root, "schema_version", 1, "");
    if (version != 1) config_error("schema_version", "unsupported version");

    ParsedConfig out;
    out.cfg.kind = ex::parse_kind(require_field<std::string>(root, "experiment", ""));
    out.cfg.replications = require_field<std::size_t>(root, "replications", "");
    if (out.cfg.replications < 1) config_error("replications", "must be >= 1");
    out.cfg.seed = optional_field<std::uint64_t>(root, "seed", 1, "");

    const json dgp = root.value("dgp", json::object());
    out.cfg.n = require_field<std::size_t>(dgp, "n", "dgp.");
    out.cfg.p = require_field<std::size_t>(dgp, "p", "dgp.");
    if (out.cfg.n < 1 || out.cfg.p < 1) config_error("dgp.n/p", "must be >= 1");
    out.cfg.m = optional_field<std::size_t>(dgp, "m", 0, "dgp.");
    out.cfg.s = optional_field<std::size_t>(dgp, "s", 0, "dgp.");
    out.cfg.sigma = optional_field<double>(dgp, "sigma", 1.0, "dgp.");
    out.cfg.pi = optional_field<double>(dgp, "pi", 1.0, "dgp.");
    out.cfg.signal_count = optional_field<std::size_t>(dgp, "signal_count", 0, "dgp.");
    out.cfg.signal_strength =
        optional_field<double>(dgp, "signal_strength", 1.0, "dgp.");

    const json method = root.value("method", json::object());
    out.cfg.alpha = optional_field<double>(method, "alpha", 0.05, "method.");
    if (!(out.cfg.alpha > 0.0 && out.cfg.alpha < 1.0))
        config_error("method.alpha", "must lie in (0,1)");
    out.cfg.B = optional_field<std::size_t>(method, "B", 500, "method.");
    if (out.cfg.B < 1) config_error("method.B", "must be >= 1");
    out.cfg.weight_mode =
        optional_field<std::string>(method, "weight_mode", "inv_sd", "method.");
    if (out.cfg.weight_mode != "unit" && out.cfg.weight_mode != "inv_sd")
        config_error("method.weight_mode", "must be 'unit' or 'inv_sd'");
    out.cfg.penalty_scale =
        optional_field<double>(method, "penalty_scale", 0.5, "method.");
    out.cfg.pp_bootstrap_draws =
        optional_field<std::size_t>(method, "pp_bootstrap_draws", 4000, "method.");
    out.cfg.grid_points =
        optional_field<std::size_t>(method, "grid_points", 25, "method.");

    out.echo = root;
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            std::optional<std::size_t> threads_override, const std::string& out_dir) {
    ParsedConfig parsed = parse_config(config_path);
    if (seed_override) parsed.cfg.seed = *seed_override;
    if (threads_override) parsed.cfg.threads = *threads_override;
    if (const char* env = std::getenv("HDINFER_THREADS");
        env != nullptr && !threads_override)
        parsed.cfg.threads = static_cast<std::size_t>(std::stoul(env));

    const ex::ExperimentResult result = ex::run_experiment(parsed.cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::string metrics = "rep";
    for (const std::string& c : result.table.columns) metrics += "," + c;
    metrics += "\n";
    for (std::size_t r = 0; r < result.table.rows.size(); ++r) {
        metrics += std::to_string(r);
        for (double v : result.table.rows[r]) metrics += "," + fmt(v);
        metrics += "\n";
    }
    const auto means = result.table.means();
    const auto ses = result.table.standard_errors();
    metrics += "mean";
    for (double v : means) metrics += "," + fmt(v);
    metrics += "\nse";
    for (double v : ses) metrics += "," + fmt(v);
    metrics += "\n";
    write_file(dir / "metrics.csv", metrics);

    json echo = parsed.echo;
    echo["seed"] = parsed.cfg.seed;
    echo["experiment"] = ex::kind_name(parsed.cfg.kind);
    write_file(dir / "config_echo.json", echo.dump(2) + "\n");

    if (!result.pp_curve.empty()) {
        std::string pp = "x,empirical,gaussian_boot,empirical_boot\n";
        for (const auto& pt : result.pp_curve)
            pp += fmt(pt.x) + "," + fmt(pt.empirical) + "," + fmt(pt.gaussian_boot) +
                  "," + fmt(pt.empirical_boot) + "\n";
        write_file(dir / "pp_curve.csv", pp);
    }
    if (!result.decisions_csv.empty())
        write_file(dir / "decisions.csv", result.decisions_csv);
    if (!result.bands_csv.empty()) write_file(dir / "bands.csv", result.bands_csv);

    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << (dir / "metrics.csv").string() << " ("
              << result.table.rows.size() << " replications)\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    parse_config(config_path);
    std::cout << "config ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hdinfer: Monte Carlo experiments for high-dimensional inference"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> threads_override;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--threads", threads_override, "worker thread count");
    run->add_option("--out", out_dir, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, seed_override, threads_override, out_dir);
        return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
