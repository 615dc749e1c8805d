#include "funclearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "funclearn/errors.hpp"
#include "funclearn/log.hpp"
#include "funclearn/metrics.hpp"
#include "funclearn/rng.hpp"
#include "funclearn/simulation.hpp"

namespace funclearn {

std::string to_string(Scenario s) { return s == Scenario::sim1 ? "sim1" : "sim2"; }

std::string to_string(Method m) {
    switch (m) {
        case Method::gdfl: return "gdfl";
        case Method::dgdfl: return "dgdfl";
        case Method::semi_dgdfl: return "semi_dgdfl";
        case Method::rk: return "rk";
        case Method::drk: return "drk";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "sim1") return Scenario::sim1;
    if (s == "sim2") return Scenario::sim2;
    throw ConfigError("unknown scenario '" + s + "' (expected sim1 or sim2)");
}

Method method_from_string(const std::string& s) {
    if (s == "gdfl") return Method::gdfl;
    if (s == "dgdfl") return Method::dgdfl;
    if (s == "semi_dgdfl") return Method::semi_dgdfl;
    if (s == "rk") return Method::rk;
    if (s == "drk") return Method::drk;
    throw ConfigError("unknown method '" + s + "'");
}

namespace {

// gdfl is the single-machine case of dgdfl, rk of drk; seeding by family
// gives a method and its divided twin identical data realizations.
std::uint64_t method_family_id(Method m) {
    switch (m) {
        case Method::gdfl:
        case Method::dgdfl: return 1;
        case Method::semi_dgdfl: return 2;
        case Method::rk:
        case Method::drk: return 3;
    }
    return 0;
}

bool is_ridge(Method m) { return m == Method::rk || m == Method::drk; }
bool is_single_machine(Method m) { return m == Method::gdfl || m == Method::rk; }

struct CellData {
    Dataset train;
    std::vector<Func> test_predictors;
    Func beta_star;
    Kernel kernel;
    Grid grid;
};

CellData make_cell_data(const ExperimentSpec& spec, int sample_size, std::uint64_t seed) {
    CellData data;
    data.grid = make_uniform_grid(spec.grid_size);
    RandomStream train_rng(hash_combine(seed, 1));
    RandomStream test_rng(hash_combine(seed, 2));
    const std::vector<int> test_counts = {spec.test_size};

    if (spec.scenario == Scenario::sim1) {
        Sim1Config cfg;
        cfg.sigma = spec.sigma;
        cfg.grid = data.grid;
        data.train = gen_dataset(cfg, sample_size, train_rng);
        data.test_predictors = std::move(gen_unlabeled(cfg, test_counts, test_rng).predictors[0]);
        data.beta_star = beta_star_sim1(cfg);
        data.kernel = BernoulliQuarticKernel{};
    } else {
        Sim2Config cfg;
        cfg.sigma = spec.sigma;
        cfg.grid = data.grid;
        data.train = gen_dataset(cfg, sample_size, train_rng);
        data.test_predictors = std::move(gen_unlabeled(cfg, test_counts, test_rng).predictors[0]);
        data.beta_star = beta_star_sim2(data.grid);
        data.kernel = GaussianKernel{0.33};
    }
    return data;
}

UnlabeledPool make_unlabeled(const ExperimentSpec& spec, const Partition& part, std::uint64_t seed) {
    std::vector<int> counts;
    counts.reserve(part.machines());
    for (int size : part.sizes()) {
        counts.push_back(static_cast<int>(std::llround(spec.unlabeled_multiplier * size)));
    }
    RandomStream rng(hash_combine(seed, 4));
    if (spec.scenario == Scenario::sim1) {
        Sim1Config cfg;
        cfg.sigma = spec.sigma;
        cfg.grid = part.subsets.front().grid;
        return gen_unlabeled(cfg, counts, rng);
    }
    Sim2Config cfg;
    cfg.sigma = spec.sigma;
    cfg.grid = part.subsets.front().grid;
    return gen_unlabeled(cfg, counts, rng);
}

} // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, Scenario scenario, Method method, int sample_size,
                        int machines, int repetition) {
    std::uint64_t h = hash_combine(master_seed, scenario == Scenario::sim1 ? 1 : 2);
    h = hash_combine(h, method_family_id(method));
    h = hash_combine(h, static_cast<std::uint64_t>(sample_size));
    h = hash_combine(h, static_cast<std::uint64_t>(machines));
    h = hash_combine(h, static_cast<std::uint64_t>(repetition));
    return h;
}

void validate_spec(const ExperimentSpec& spec) {
    // Empty sample_sizes or machine_counts are allowed: the sweep is empty.
    for (int n : spec.sample_sizes) {
        if (n < 1) throw ConfigError("sample_sizes entries must be >= 1");
    }
    for (int m : spec.machine_counts) {
        if (m < 1) throw ConfigError("machine_counts entries must be >= 1");
    }
    if (spec.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (spec.test_size < 1) throw ConfigError("test_size must be >= 1");
    if (spec.grid_size < 3) throw ConfigError("grid_size must be >= 3");
    if (spec.sigma < 0.0) throw ConfigError("sigma must be nonnegative");
    if (spec.unlabeled_multiplier < 0.0) throw ConfigError("unlabeled_multiplier must be nonnegative");
    if (spec.fixed_iteration_exponent < 0.0 || spec.fixed_iteration_exponent >= 2.0) {
        throw ConfigError("fixed_iteration_exponent must lie in [0, 2)");
    }

    if (!spec.sample_sizes.empty() && !spec.machine_counts.empty()) {
        const int max_machines = *std::max_element(spec.machine_counts.begin(), spec.machine_counts.end());
        const int min_size = *std::min_element(spec.sample_sizes.begin(), spec.sample_sizes.end());
        if (min_size < max_machines) {
            throw ConfigError("every sample size must be at least the machine count (got size " +
                              std::to_string(min_size) + " with " + std::to_string(max_machines) +
                              " machines)");
        }
    }
    if (is_single_machine(spec.method)) {
        for (int m : spec.machine_counts) {
            if (m != 1) {
                throw ConfigError(to_string(spec.method) +
                                  " is a single-machine method; machine_counts must be all 1");
            }
        }
    }
    if (is_ridge(spec.method) && !(spec.ridge.lambda > 0.0)) {
        throw ConfigError("lambda must be positive for " + to_string(spec.method));
    }
}

ResultRow run_cell(const ExperimentSpec& spec, int sample_size, int machines, int repetition) {
    ResultRow row;
    row.scenario = to_string(spec.scenario);
    row.method = to_string(spec.method);
    row.sample_size = sample_size;
    row.machines = machines;
    row.repetition = repetition;

    try {
        const std::uint64_t seed =
            cell_seed(spec.master_seed, spec.scenario, spec.method, sample_size, machines, repetition);
        const CellData data = make_cell_data(spec, sample_size, seed);

        RandomStream part_rng(hash_combine(seed, 3));
        const Partition part = partition(data.train, machines, part_rng);

        FitConfig fit = spec.fit;
        if (spec.fixed_iteration_exponent > 0.0) {
            const double t = std::floor(std::pow(static_cast<double>(sample_size),
                                                 spec.fixed_iteration_exponent));
            fit.fixed_iterations = std::max(1, static_cast<int>(t));
            fit.max_iter = std::max(fit.max_iter, *fit.fixed_iterations);
        }

        Estimator est;
        switch (spec.method) {
            case Method::gdfl:
            case Method::dgdfl: est = dgdfl_fit(part, data.kernel, fit); break;
            case Method::semi_dgdfl:
                est = semi_dgdfl_fit(part, make_unlabeled(spec, part, seed), data.kernel, fit);
                break;
            case Method::rk:
            case Method::drk: est = drk_fit(part, data.kernel, spec.ridge); break;
        }

        row.estimation_error = estimation_error(est.beta, data.beta_star, data.grid);
        row.prediction_error = excess_risk(est.beta, data.beta_star, data.test_predictors, data.grid);
        row.iterations = est.iterations;
        row.converged = est.converged;
        row.wall_time_seconds = est.wall_time_seconds;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.estimation_error = std::numeric_limits<double>::quiet_NaN();
        row.prediction_error = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int parallelism) {
    if (parallelism < 1) throw std::invalid_argument("run_experiment: parallelism must be >= 1");
    validate_spec(spec);

    struct Cell {
        int size, machines, repetition;
    };
    std::vector<Cell> cells;
    std::vector<int> sizes_sorted = spec.sample_sizes;
    std::vector<int> machines_sorted = spec.machine_counts;
    std::sort(sizes_sorted.begin(), sizes_sorted.end());
    std::sort(machines_sorted.begin(), machines_sorted.end());
    for (int n : sizes_sorted) {
        for (int m : machines_sorted) {
            for (int r = 0; r < spec.repetitions; ++r) cells.push_back({n, m, r});
        }
    }

    log_info("running " + std::to_string(cells.size()) + " cells (" + to_string(spec.scenario) + ", " +
             to_string(spec.method) + ", parallelism " + std::to_string(parallelism) + ")");

    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            log_debug("cell size=" + std::to_string(c.size) + " machines=" + std::to_string(c.machines) +
                      " rep=" + std::to_string(c.repetition));
            rows[i] = run_cell(spec, c.size, c.machines, c.repetition);
            if (rows[i].failed()) {
                log_error("cell size=" + std::to_string(c.size) + " machines=" + std::to_string(c.machines) +
                          " rep=" + std::to_string(c.repetition) + " failed: " + rows[i].error);
            }
        }
    };

    const int n_workers = std::min<std::size_t>(parallelism, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // Cells were enumerated in (size, machines, repetition) order already.
    return rows;
}

namespace {

struct Accumulator {
    int count = 0;
    double sum = 0.0, sumsq = 0.0;

    void add(double v) {
        ++count;
        sum += v;
        sumsq += v * v;
    }
    double mean() const { return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN(); }
    double stddev() const {
        if (count <= 1) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sumsq - count * m * m) / (count - 1));
        return std::sqrt(var);
    }
};

} // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("summarize: no rows");

    using Key = std::tuple<std::string, std::string, int, int>;
    struct Group {
        int total = 0, failed = 0;
        Accumulator est, pred, time, iters;
    };
    std::map<Key, Group> groups;
    for (const ResultRow& r : rows) {
        Group& g = groups[{r.scenario, r.method, r.sample_size, r.machines}];
        ++g.total;
        if (r.failed()) {
            ++g.failed;
            continue;
        }
        g.est.add(r.estimation_error);
        g.pred.add(r.prediction_error);
        g.time.add(r.wall_time_seconds);
        g.iters.add(static_cast<double>(r.iterations));
    }

    std::vector<SummaryRow> out;
    out.reserve(groups.size());
    for (const auto& [key, g] : groups) {
        SummaryRow s;
        s.scenario = std::get<0>(key);
        s.method = std::get<1>(key);
        s.sample_size = std::get<2>(key);
        s.machines = std::get<3>(key);
        s.count = g.total;
        s.failed = g.failed;
        s.estimation_error_mean = g.est.mean();
        s.estimation_error_std = g.est.stddev();
        s.prediction_error_mean = g.pred.mean();
        s.prediction_error_std = g.pred.stddev();
        s.wall_time_mean = g.time.mean();
        s.wall_time_std = g.time.stddev();
        s.iterations_mean = g.iters.mean();
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace funclearn
