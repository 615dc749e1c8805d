#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "funclearn/errors.hpp"
#include "funclearn/experiment.hpp"
#include "funclearn/log.hpp"
#include "funclearn/rng.hpp"
#include "funclearn/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

int cmd_run(const std::string& config_path, const std::string& out_path, int parallelism,
            const std::string& seed_override, bool strip_timing) {
    funclearn::ExperimentSpec spec = funclearn::load_spec(config_path);
    if (!seed_override.empty()) spec.master_seed = std::stoull(seed_override);
    funclearn::validate_spec(spec);

    const auto rows = funclearn::run_experiment(spec, parallelism);
    int failed = 0;
    for (const auto& r : rows) failed += r.failed() ? 1 : 0;

    funclearn::CsvOptions options;
    options.zero_wall_time = strip_timing;
    funclearn::write_csv(rows, out_path, options);
    funclearn::log_info("wrote " + std::to_string(rows.size()) + " rows to " + out_path +
                        (failed > 0 ? " (" + std::to_string(failed) + " failed cells)" : ""));
    return kExitOk;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path, const std::string& svg_path) {
    const auto rows = funclearn::read_result_csv(in_path);
    const auto summary = funclearn::summarize(rows);
    funclearn::write_csv(summary, out_path);
    funclearn::log_info("wrote " + std::to_string(summary.size()) + " summary rows to " + out_path);
    if (!svg_path.empty()) {
        funclearn::write_svg(summary, svg_path);
        funclearn::log_info("wrote plot to " + svg_path);
    }
    return kExitOk;
}

int cmd_gen_data(const std::string& config_path, int n, const std::string& out_path) {
    const funclearn::ExperimentSpec spec = funclearn::load_spec(config_path);
    const funclearn::Grid grid = funclearn::make_uniform_grid(spec.grid_size);
    funclearn::RandomStream rng(funclearn::hash_combine(spec.master_seed, 0x6d617461)); // "data"

    funclearn::Dataset dataset;
    if (spec.scenario == funclearn::Scenario::sim1) {
        funclearn::Sim1Config cfg;
        cfg.sigma = spec.sigma;
        cfg.grid = grid;
        dataset = funclearn::gen_dataset(cfg, n, rng);
    } else {
        funclearn::Sim2Config cfg;
        cfg.sigma = spec.sigma;
        cfg.grid = grid;
        dataset = funclearn::gen_dataset(cfg, n, rng);
    }
    funclearn::write_dataset_csv(dataset, out_path);
    funclearn::log_info("wrote " + std::to_string(dataset.size()) + " samples to " + out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-descent functional linear regression: simulation sweeps and baselines"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, svg_path, seed_override;
    int parallelism = 1;
    int n_samples = 100;
    bool strip_timing = false;

    auto* run = app.add_subcommand("run", "Run the experiment sweep described by a config file");
    run->add_option("--config", config_path, "Config file (key=value lines)")->required();
    run->add_option("--out", out_path, "Output CSV for per-cell results")->required();
    run->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed_override, "Override master_seed from the config");
    run->add_flag("--strip-timing", strip_timing,
                  "Write wall_time_seconds as 0 (bitwise-reproducible output)");

    auto* summ = app.add_subcommand("summarize", "Aggregate a results CSV into per-cell mean/std");
    summ->add_option("--in", in_path, "Results CSV from 'run'")->required();
    summ->add_option("--out", out_path, "Output summary CSV")->required();
    summ->add_option("--svg", svg_path, "Optional scatter/error-bar plot");

    auto* gen = app.add_subcommand("gen-data", "Dump one generated dataset as CSV");
    gen->add_option("--config", config_path, "Config file (scenario, sigma, grid_size, master_seed)")
        ->required();
    gen->add_option("--n", n_samples, "Number of samples")->required()->check(CLI::PositiveNumber);
    gen->add_option("--out", out_path, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_path, parallelism, seed_override, strip_timing);
        if (summ->parsed()) return cmd_summarize(in_path, out_path, svg_path);
        if (gen->parsed()) return cmd_gen_data(config_path, n_samples, out_path);
    } catch (const funclearn::ConfigError& e) {
        funclearn::log_error(e.what());
        return kExitConfig;
    } catch (const funclearn::IoError& e) {
        funclearn::log_error(e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        funclearn::log_error(e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
