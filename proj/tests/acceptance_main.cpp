// Acceptance suite: one criterion per --criterion value, one PASS/FAIL line
// each. Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "funclearn/experiment.hpp"
#include "funclearn/metrics.hpp"
#include "funclearn/ridge.hpp"
#include "funclearn/rng.hpp"
#include "funclearn/simulation.hpp"

using namespace funclearn;

namespace {

int g_parallelism = 2;

struct Checker {
    bool ok = true;
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            failures.push_back(what);
        }
    }
};

constexpr std::uint64_t kMasterSeed = 20240801;

Dataset sim2_dataset(int n, std::uint64_t seed) {
    Sim2Config cfg;
    cfg.grid = make_uniform_grid(201);
    RandomStream rng(seed);
    return gen_dataset(cfg, n, rng);
}

bool bitwise_equal(const Func& a, const Func& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

// ---------------------------------------------------------------------------
// 1. Exact equivalences between the divided and undivided learners.
void criterion1(Checker& c) {
    const Dataset d = sim2_dataset(60, 41);
    const Kernel kernel = GaussianKernel{0.33};
    FitConfig fit;

    RandomStream prng(42);
    const Partition single = partition(d, 1, prng);
    const Estimator gd = gdfl_fit(single.subsets[0], kernel, fit);
    const Estimator dg = dgdfl_fit(single, kernel, fit);
    c.expect(bitwise_equal(gd.beta, dg.beta), "dgdfl[m=1] != gdfl bit for bit");

    const Partition three = partition(d, 3, prng);
    UnlabeledPool empty;
    empty.predictors.resize(3);
    const Estimator plain = dgdfl_fit(three, kernel, fit);
    const Estimator semi = semi_dgdfl_fit(three, empty, kernel, fit);
    c.expect(bitwise_equal(plain.beta, semi.beta), "semi_dgdfl[empty pools] != dgdfl bit for bit");

    RidgeConfig ridge{1e-3};
    const Estimator rk = rls_fit(single.subsets[0], kernel, ridge);
    const Estimator drk = drk_fit(single, kernel, ridge);
    c.expect((rk.beta - drk.beta).cwiseAbs().maxCoeff() <= 1e-12, "drk[m=1] deviates from rls > 1e-12");
}

// ---------------------------------------------------------------------------
// 2. Quadrature and kernel oracles.
void criterion2(Checker& c) {
    const Grid grid = make_uniform_grid(201);

    std::vector<Func> basis;
    for (int k = 0; k <= 50; ++k) basis.push_back(cosine_basis(k, grid));
    double max_orth = 0.0;
    for (int j = 0; j <= 50; ++j) {
        for (int k = 0; k <= 50; ++k) {
            max_orth = std::max(max_orth, std::abs(inner(basis[j], basis[k], grid) - (j == k ? 1.0 : 0.0)));
        }
    }
    c.expect(max_orth <= 1e-12, "cosine orthonormality deviation " + std::to_string(max_orth));

    std::vector<double> w(10000);
    for (int k = 1; k <= 10000; ++k) w[k - 1] = 2.0 / std::pow(k * M_PI, 4.0);
    const Eigen::MatrixXd closed = kernel_matrix(BernoulliQuarticKernel{}, grid);
    const Eigen::MatrixXd series = kernel_matrix(CosineSeriesKernel{w}, grid);
    const double kernel_dev = (closed - series).cwiseAbs().maxCoeff();
    c.expect(kernel_dev <= 1e-10, "Bernoulli vs series deviation " + std::to_string(kernel_dev));

    double max_eig_dev = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const Func lk = apply_kernel_operator(BernoulliQuarticKernel{}, basis[k], grid);
        max_eig_dev = std::max(max_eig_dev,
                               (lk - std::pow(k * M_PI, -4.0) * basis[k]).cwiseAbs().maxCoeff());
    }
    c.expect(max_eig_dev <= 1e-10, "eigenrelation deviation " + std::to_string(max_eig_dev));
}

// ---------------------------------------------------------------------------
// 3. Gradient correctness and empirical-risk descent.
void criterion3(Checker& c) {
    const Dataset d = sim2_dataset(20, 321);
    const Grid& grid = d.grid;
    const Kernel kernel = GaussianKernel{0.33};

    const Func beta =
        0.7 * cosine_basis(0, grid) - 1.3 * cosine_basis(2, grid) + 0.4 * cosine_basis(5, grid);
    const Func direction = beta - gdfl_step(beta, d, kernel, 1.0);

    auto risk = [&](const Func& b) {
        double sum = 0.0;
        for (int i = 0; i < d.size(); ++i) {
            const double r = inner(b, d.predictors[i], grid) - d.responses[i];
            sum += r * r;
        }
        return sum / d.size();
    };
    const double h = 1e-6;
    for (int j = 0; j < d.size(); ++j) {
        const Func dir = apply_kernel_operator(kernel, d.predictors[j], grid);
        const double fd = (risk(beta + h * dir) - risk(beta - h * dir)) / (2.0 * h);
        const double coord = inner(direction, d.predictors[j], grid);
        const double rel = std::abs(coord - 0.5 * fd) / std::max(std::abs(0.5 * fd), 1e-30);
        if (rel > 1e-5) {
            c.expect(false, "gradient coordinate " + std::to_string(j) + " relative deviation " +
                                std::to_string(rel));
            return;
        }
    }

    const Dataset big = sim2_dataset(50, 77);
    FitConfig fit;
    fit.mu = 0.0;
    fit.record_risk = true; // gamma0 unset: the estimated step constant
    const Estimator est = gdfl_fit(big, kernel, fit);
    c.expect(est.risk_trace.size() >= 2, "risk trace not recorded");
    for (std::size_t t = 1; t < est.risk_trace.size(); ++t) {
        if (est.risk_trace[t] > est.risk_trace[t - 1] * (1.0 + 1e-12)) {
            c.expect(false, "risk increased at iteration " + std::to_string(t));
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Ridge optimality.
void criterion4(Checker& c) {
    const Dataset d = sim2_dataset(50, 202);
    const Kernel kernel = GaussianKernel{0.33};
    const RidgeConfig ridge{1e-3};
    const Estimator est = rls_fit(d, kernel, ridge);

    const Eigen::MatrixXd m = gram_matrix(d, kernel);
    const Eigen::Map<const Eigen::VectorXd> y(d.responses.data(), d.size());
    Eigen::MatrixXd system = m;
    system.diagonal().array() += d.size() * ridge.lambda;
    const Eigen::VectorXd coeff = system.ldlt().solve(y);
    const double resid = (system * coeff - y).norm();
    c.expect(resid <= 1e-8 * y.norm(), "normal-equation residual " + std::to_string(resid));

    auto objective = [&](const Eigen::VectorXd& cv) {
        return (m * cv - y).squaredNorm() / d.size() + ridge.lambda * cv.dot(m * cv);
    };
    const double base = objective(coeff);
    RandomStream rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd delta(d.size());
        for (int i = 0; i < d.size(); ++i) delta[i] = rng.uniform(-1.0, 1.0);
        Func f = Func::Zero(d.grid.size());
        for (int i = 0; i < d.size(); ++i) {
            f += delta[i] * apply_kernel_operator(kernel, d.predictors[i], d.grid);
        }
        const double norm = l2_norm(f, d.grid);
        if (norm == 0.0) continue;
        delta *= 1e-3 / norm;
        if (objective(coeff + delta) < base - 1e-12) {
            c.expect(false, "perturbation " + std::to_string(trial) + " improves the objective");
            return;
        }
    }

    // The fitted estimator is the representer expansion of those coefficients.
    Func expansion = Func::Zero(d.grid.size());
    for (int i = 0; i < d.size(); ++i) {
        expansion += coeff[i] * apply_kernel_operator(kernel, d.predictors[i], d.grid);
    }
    c.expect((est.beta - expansion).cwiseAbs().maxCoeff() <= 1e-10,
             "rls_fit output deviates from the representer expansion");
}

// ---------------------------------------------------------------------------
// 5. Spectral diagnostics.
void criterion5(Checker& c) {
    const Kernel kernel = BernoulliQuarticKernel{};

    {
        Sim1Config cfg;
        cfg.grid = make_uniform_grid(201);
        RandomStream rng(5150);
        const Dataset d = gen_dataset(cfg, 60, rng);

        // Brute-force Gram matrix through per-entry double quadrature.
        Eigen::MatrixXd m(d.size(), d.size());
        for (int i = 0; i < d.size(); ++i) {
            for (int j = i; j < d.size(); ++j) {
                m(i, j) = m(j, i) = gram_entry(d.predictors[i], kernel, d.predictors[j], cfg.grid);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m / d.size(), Eigen::EigenvaluesOnly);
        Eigen::VectorXd expected = es.eigenvalues().reverse();

        const auto spectrum = empirical_tck_spectrum(d, kernel);
        double dev = 0.0;
        for (int i = 0; i < d.size(); ++i) dev = std::max(dev, std::abs(spectrum[i] - expected[i]));
        c.expect(dev <= 1e-8, "spectrum deviates from the Gram oracle by " + std::to_string(dev));
    }

    {
        Sim1Config cfg;
        cfg.grid = make_uniform_grid(201);
        RandomStream rng(2718);
        const Dataset d = gen_dataset(cfg, 2000, rng);
        const auto spectrum = empirical_tck_spectrum(d, kernel);
        for (int k = 1; k <= 5; ++k) {
            const double analytic = std::pow(k * M_PI, -4.0) / static_cast<double>(k);
            const double rel = std::abs(spectrum[k - 1] - analytic) / analytic;
            c.expect(rel <= 0.10, "eigenvalue " + std::to_string(k) + " off by " +
                                      std::to_string(100.0 * rel) + "%");
        }
    }

    const std::vector<double> two = {1.0, 0.5};
    c.expect(std::abs(effective_dimension(two, 0.5) - 7.0 / 6.0) <= 1e-12,
             "effective_dimension({1,0.5}, 0.5) != 7/6");
}

// ---------------------------------------------------------------------------
// 6. Reported-table reproduction (sim 2, 100 repetitions).
struct ReportedCell {
    Method method;
    int machines;
    int size;
    double est_mean, est_std, pred_mean, pred_std;
};

// Reported mean (std) per method and sample size; the estimation column is
// compared as the squared L2 error (the unsquared reading is impossible:
// the excess risk bounds the squared error from below in this design).
const ReportedCell kReportedTable[] = {
    {Method::gdfl, 1, 100, 0.1936, 0.1628, 0.0788, 0.0703},
    {Method::dgdfl, 2, 100, 0.1948, 0.1581, 0.0774, 0.0678},
    {Method::dgdfl, 5, 100, 0.2252, 0.1467, 0.0888, 0.0698},
    {Method::rk, 1, 100, 0.2179, 0.1656, 0.0851, 0.0694},
    {Method::drk, 2, 100, 0.2086, 0.1587, 0.0820, 0.0681},
    {Method::drk, 5, 100, 0.2205, 0.1761, 0.0914, 0.0762},
    {Method::gdfl, 1, 200, 0.1140, 0.0630, 0.0403, 0.0256},
    {Method::dgdfl, 2, 200, 0.1180, 0.0681, 0.0407, 0.0261},
    {Method::dgdfl, 5, 200, 0.1204, 0.0703, 0.0431, 0.0274},
    {Method::rk, 1, 200, 0.1189, 0.0905, 0.0420, 0.0305},
    {Method::drk, 2, 200, 0.1162, 0.0760, 0.0416, 0.0278},
    {Method::drk, 5, 200, 0.1294, 0.0840, 0.0458, 0.0303},
    {Method::gdfl, 1, 500, 0.0678, 0.0325, 0.0214, 0.0117},
    {Method::dgdfl, 2, 500, 0.0732, 0.0317, 0.0220, 0.0113},
    {Method::dgdfl, 5, 500, 0.0792, 0.0342, 0.0238, 0.0124},
    {Method::rk, 1, 500, 0.0625, 0.0452, 0.0206, 0.0150},
    {Method::drk, 2, 500, 0.0724, 0.0492, 0.0230, 0.0152},
    {Method::drk, 5, 500, 0.0795, 0.0465, 0.0250, 0.0148},
};

ExperimentSpec sim2_table_spec(Method method, std::vector<int> machines) {
    ExperimentSpec spec;
    spec.scenario = Scenario::sim2;
    spec.method = method;
    spec.sample_sizes = {100, 200, 500};
    spec.machine_counts = std::move(machines);
    spec.repetitions = 100;
    spec.master_seed = kMasterSeed;
    spec.sigma = 1.5;
    spec.test_size = 1000;
    spec.grid_size = 201;
    spec.fit.mu = 0.0;
    spec.fit.tol = 1e-4;
    spec.fit.max_iter = 100000;
    spec.ridge.lambda = 1e-3;
    return spec;
}

void criterion6(Checker& c) {
    std::vector<ResultRow> rows;
    for (const auto& [method, machines] :
         std::vector<std::pair<Method, std::vector<int>>>{{Method::gdfl, {1}},
                                                          {Method::dgdfl, {2, 5}},
                                                          {Method::rk, {1}},
                                                          {Method::drk, {2, 5}}}) {
        const auto part = run_experiment(sim2_table_spec(method, machines), g_parallelism);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    // Per-cell means; estimation enters as the squared L2 error.
    struct CellStat {
        double pred_mean = 0, est2_mean = 0, time_mean = 0;
        int n = 0;
    };
    auto stat_of = [&](Method method, int machines, int size) {
        CellStat s;
        for (const ResultRow& r : rows) {
            if (r.method != to_string(method) || r.machines != machines || r.sample_size != size ||
                r.failed()) {
                continue;
            }
            s.pred_mean += r.prediction_error;
            s.est2_mean += r.estimation_error * r.estimation_error;
            s.time_mean += r.wall_time_seconds;
            ++s.n;
        }
        s.pred_mean /= s.n;
        s.est2_mean /= s.n;
        s.time_mean /= s.n;
        return s;
    };

    int est_out_of_band = 0;
    for (const ReportedCell& cell : kReportedTable) {
        const CellStat s = stat_of(cell.method, cell.machines, cell.size);
        c.expect(s.n == 100, to_string(cell.method) + " n=" + std::to_string(cell.size) + " lost cells");

        const double pred_lo = cell.pred_mean - cell.pred_std;
        const double pred_hi = cell.pred_mean + cell.pred_std;
        const bool pred_ok = s.pred_mean >= pred_lo && s.pred_mean <= pred_hi;
        const double est_lo = cell.est_mean - cell.est_std;
        const double est_hi = cell.est_mean + cell.est_std;
        const bool est_ok = s.est2_mean >= est_lo && s.est2_mean <= est_hi;

        std::printf("    table %-5s[m=%d] n=%3d: pred %.4f in [%.4f, %.4f] %s; est^2 %.4f in "
                    "[%.4f, %.4f] %s\n",
                    to_string(cell.method).c_str(), cell.machines, cell.size, s.pred_mean, pred_lo,
                    pred_hi, pred_ok ? "ok" : "OUT", s.est2_mean, est_lo, est_hi,
                    est_ok ? "ok" : "out (reported, non-fatal)");

        c.expect(pred_ok, to_string(cell.method) + "[m=" + std::to_string(cell.machines) +
                              "] n=" + std::to_string(cell.size) + " prediction mean " +
                              std::to_string(s.pred_mean) + " outside the reported band");
        if (!est_ok) ++est_out_of_band;
    }
    if (est_out_of_band > 0) {
        std::printf("    note: %d estimation cells outside the reported band (non-fatal per the "
                    "norm-convention caveat)\n",
                    est_out_of_band);
    }

    // Timing orderings (absolute times are hardware-bound, orderings are not).
    for (int size : {100, 200, 500}) {
        const double t1 = stat_of(Method::gdfl, 1, size).time_mean;
        const double t2 = stat_of(Method::dgdfl, 2, size).time_mean;
        const double t5 = stat_of(Method::dgdfl, 5, size).time_mean;
        std::printf("    per-machine time n=%3d: gdfl %.4fs, dgdfl[2] %.4fs, dgdfl[5] %.4fs\n", size,
                    t1, t2, t5);
        c.expect(t1 > t2 && t2 > t5, "per-machine fit time not decreasing in m at n=" +
                                         std::to_string(size));
    }
    const double rk_growth = stat_of(Method::rk, 1, 500).time_mean / stat_of(Method::rk, 1, 100).time_mean;
    const double gd_growth =
        stat_of(Method::gdfl, 1, 500).time_mean / stat_of(Method::gdfl, 1, 100).time_mean;
    std::printf("    time growth 100 -> 500: rk x%.1f, gdfl x%.1f\n", rk_growth, gd_growth);
    c.expect(rk_growth > gd_growth, "rk fit time does not grow faster than gdfl");
}

// ---------------------------------------------------------------------------
// 7. Rate trends of the first simulation (20 repetitions).
void criterion7(Checker& c) {
    ExperimentSpec spec;
    spec.scenario = Scenario::sim1;
    spec.method = Method::dgdfl;
    spec.sample_sizes = {500, 1000, 2000, 5000};
    spec.machine_counts = {1, 10, 50};
    spec.repetitions = 20;
    spec.master_seed = kMasterSeed;
    spec.sigma = 1.0;
    spec.test_size = 5000;
    spec.grid_size = 201;
    spec.fit.mu = 0.1;
    spec.fit.tol = 1e-4;
    spec.fit.max_iter = 100000;
    // Theoretical schedule t = floor(n^(1/((2 theta + alpha + 1)(1 - mu))))
    // with theta = 0.1 and capacity alpha = 1/(2r), 2r = 5.
    spec.fixed_iteration_exponent = 1.0 / ((2.0 * 0.1 + 0.2 + 1.0) * (1.0 - 0.1));

    const auto summary = summarize(run_experiment(spec, g_parallelism));
    auto risk_of = [&](int machines, int size) {
        for (const SummaryRow& s : summary) {
            if (s.machines == machines && s.sample_size == size) return s.prediction_error_mean;
        }
        return -1.0;
    };

    for (int m : {1, 10, 50}) {
        double prev = 1e300;
        for (int n : {500, 1000, 2000, 5000}) {
            const double risk = risk_of(m, n);
            std::printf("    sim1 m=%2d n=%4d mean excess risk %.5f\n", m, n, risk);
            c.expect(risk < prev, "excess risk not strictly decreasing at m=" + std::to_string(m) +
                                      ", n=" + std::to_string(n));
            prev = risk;
        }
    }

    const double r1 = risk_of(1, 5000), r10 = risk_of(10, 5000);
    const double rel = std::abs(r10 - r1) / r1;
    std::printf("    sim1 n=5000: m=10 vs m=1 relative gap %.1f%%\n", 100.0 * rel);
    c.expect(rel <= 0.25, "m=10 risk at n=5000 deviates from m=1 by " + std::to_string(100.0 * rel) + "%");

    // Least-squares slope of log risk vs log n for m = 1.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int points = 4;
    for (int n : {500, 1000, 2000, 5000}) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(risk_of(1, n));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
    std::printf("    sim1 m=1 log-log slope %.3f (theory ~ -0.86)\n", slope);
    c.expect(slope >= -1.3 && slope <= -0.4, "slope " + std::to_string(slope) + " outside [-1.3, -0.4]");
}

// ---------------------------------------------------------------------------
// 8. Determinism: schedule-independent, byte-identical output.
void criterion8(Checker& c) {
    ExperimentSpec spec;
    spec.scenario = Scenario::sim2;
    spec.method = Method::dgdfl;
    spec.sample_sizes = {40, 60};
    spec.machine_counts = {1, 2};
    spec.repetitions = 3;
    spec.master_seed = kMasterSeed;
    spec.test_size = 50;
    spec.grid_size = 81;
    spec.fit.tol = 1e-3;
    spec.fit.max_iter = 20000;

    CsvOptions options;
    options.zero_wall_time = true; // timing is measurement, not computation

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const auto rows1 = run_experiment(spec, 1);
    const auto rows8 = run_experiment(spec, 8);
    const auto rows8b = run_experiment(spec, 8);
    write_csv(rows1, "acceptance_p1.csv", options);
    write_csv(rows8, "acceptance_p8.csv", options);
    write_csv(rows8b, "acceptance_p8b.csv", options);

    const std::string a = slurp("acceptance_p1.csv");
    const std::string b = slurp("acceptance_p8.csv");
    const std::string b2 = slurp("acceptance_p8b.csv");
    c.expect(!a.empty(), "empty CSV output");
    c.expect(a == b, "parallelism 1 vs 8 CSVs differ");
    c.expect(b == b2, "repeated runs differ");
    std::remove("acceptance_p1.csv");
    std::remove("acceptance_p8.csv");
    std::remove("acceptance_p8b.csv");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "exact equivalences (dgdfl[1]=gdfl, semi[empty]=dgdfl, drk[1]=rls)", criterion1},
    {2, "quadrature and kernel oracles", criterion2},
    {3, "gradient direction and risk descent", criterion3},
    {4, "ridge optimality", criterion4},
    {5, "spectral diagnostics", criterion5},
    {6, "reported-table reproduction (sim 2, 100 reps)", criterion6},
    {7, "rate trends of simulation 1 (20 reps)", criterion7},
    {8, "determinism across schedules", criterion8},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--parallelism") == 0 && i + 1 < argc) g_parallelism = std::atoi(argv[++i]);
    }

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (only != 0 && criterion.id != only) continue;
        Checker checker;
        const auto started = std::chrono::steady_clock::now();
        criterion.run(checker);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("[%s] criterion %d: %s (%.1fs)\n", checker.ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, seconds);
        for (const std::string& f : checker.failures) std::printf("       - %s\n", f.c_str());
        std::fflush(stdout);
        if (!checker.ok) ++failures;
    }
    return failures;
}
