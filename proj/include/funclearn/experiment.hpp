#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "funclearn/fit.hpp"
#include "funclearn/ridge.hpp"

namespace funclearn {

enum class Scenario { sim1, sim2 };
enum class Method { gdfl, dgdfl, semi_dgdfl, rk, drk };

std::string to_string(Scenario s);
std::string to_string(Method m);
Scenario scenario_from_string(const std::string& s);
Method method_from_string(const std::string& s);

/// One sweep: a method run over a grid of sample sizes and machine counts,
/// repeated with derived per-cell seeds.
struct ExperimentSpec {
    Scenario scenario = Scenario::sim2;
    std::vector<int> sample_sizes;
    std::vector<int> machine_counts;
    Method method = Method::gdfl;
    int repetitions = 1;
    std::uint64_t master_seed = 0;
    FitConfig fit;
    RidgeConfig ridge;
    double sigma = 1.5;
    double unlabeled_multiplier = 0.0; // semi_dgdfl: unlabeled per machine = round(mult * |D_j|)
    int test_size = 1000;
    int grid_size = 201;
    // > 0: every machine in a cell runs exactly floor(sample_size^exponent)
    // steps, the theoretical early-stopping schedule; 0 keeps the fit's own
    // stopping rule.
    double fixed_iteration_exponent = 0.0;
};

/// Throws ConfigError when an invariant is violated (empty lists, sizes below
/// the machine count, single-machine methods paired with machine_counts != {1}, ...).
void validate_spec(const ExperimentSpec& spec);

struct ResultRow {
    std::string scenario;
    std::string method;
    int sample_size = 0;
    int machines = 0;
    int repetition = 0;
    double estimation_error = 0.0;
    double prediction_error = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_time_seconds = 0.0;
    std::string error; // nonempty marks a failed cell; metric fields are then meaningless

    bool failed() const { return !error.empty(); }
};

struct SummaryRow {
    std::string scenario;
    std::string method;
    int sample_size = 0;
    int machines = 0;
    int count = 0;
    int failed = 0;
    double estimation_error_mean = 0.0;
    double estimation_error_std = 0.0;
    double prediction_error_mean = 0.0;
    double prediction_error_std = 0.0;
    double wall_time_mean = 0.0;
    double wall_time_std = 0.0;
    double iterations_mean = 0.0;
};

/// Deterministic per-cell seed. The method enters through its algorithm
/// family (gdfl is hashed as dgdfl, rk as drk), so a single-machine
/// divide-and-conquer run sees exactly the data of its undivided twin.
std::uint64_t cell_seed(std::uint64_t master_seed, Scenario scenario, Method method, int sample_size,
                        int machines, int repetition);

/// Generates data, partitions, fits by the spec's method and computes
/// metrics. Fit failures are captured in the row's error field, never thrown.
ResultRow run_cell(const ExperimentSpec& spec, int sample_size, int machines, int repetition);

/// All (size x machines x repetition) cells on a bounded worker pool; rows
/// sorted by (size, machines, repetition) whatever the schedule.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int parallelism);

/// Group rows by (scenario, method, size, machines); mean and sample standard
/// deviation per metric (std = 0 for single-row groups). Failed rows are
/// counted but excluded from the statistics. Throws on empty input.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

struct CsvOptions {
    // Writes 0 for wall_time_seconds: timing is measurement, not computation,
    // and must not enter byte-identity comparisons.
    bool zero_wall_time = false;
};

void write_csv(const std::vector<ResultRow>& rows, const std::string& path, const CsvOptions& options = {});
void write_csv(const std::vector<SummaryRow>& rows, const std::string& path);
std::vector<ResultRow> read_result_csv(const std::string& path);

/// Flat key=value experiment config ('#' comments, lists comma-separated).
ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec load_spec(const std::string& path);

/// Log-log scatter of mean prediction error vs sample size with std error
/// bars, one series per (method, machines).
void write_svg(const std::vector<SummaryRow>& rows, const std::string& path);

} // namespace funclearn
