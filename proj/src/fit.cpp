#include "funclearn/fit.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "funclearn/errors.hpp"
#include "funclearn/rng.hpp"

namespace funclearn {

namespace {

constexpr double kDivergenceGuard = 1e12;

void validate(const FitConfig& cfg) {
    if (cfg.gamma0 && !(*cfg.gamma0 > 0.0)) throw std::invalid_argument("FitConfig: gamma0 must be positive");
    if (cfg.mu < 0.0 || cfg.mu >= 1.0) throw std::invalid_argument("FitConfig: mu must lie in [0, 1)");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("FitConfig: tol must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("FitConfig: max_iter must be >= 1");
    if (cfg.fixed_iterations && (*cfg.fixed_iterations < 1 || *cfg.fixed_iterations > cfg.max_iter)) {
        throw std::invalid_argument("FitConfig: fixed_iterations must lie in [1, max_iter]");
    }
    if (cfg.tol_ref_size < 0.0) throw std::invalid_argument("FitConfig: tol_ref_size must be nonnegative");
}

// Shared per-fit precomputation: one kernel matrix build and one GEMM give
// every L_K X_i; iterations afterwards cost O(n G).
struct FitWorkspace {
    const Grid* grid = nullptr;
    Eigen::MatrixXd weighted_x; // column i = w .* X_i
    Eigen::MatrixXd lkx;        // column i = L_K X_i
    Eigen::VectorXd y;
};

FitWorkspace build_workspace(const Dataset& dataset, const Kernel& kernel) {
    if (dataset.size() < 1) throw std::invalid_argument("fit: dataset is empty");
    const Eigen::Index g = dataset.grid.size();
    const int n = dataset.size();

    FitWorkspace ws;
    ws.grid = &dataset.grid;
    ws.weighted_x.resize(g, n);
    ws.y.resize(n);
    for (int i = 0; i < n; ++i) {
        if (dataset.predictors[i].size() != g) {
            throw std::invalid_argument("fit: predictor " + std::to_string(i) + " not on the dataset grid");
        }
        ws.weighted_x.col(i) = (dataset.grid.weights.array() * dataset.predictors[i].array()).matrix();
        ws.y[i] = dataset.responses[i];
    }
    ws.lkx = kernel_matrix(kernel, dataset.grid) * ws.weighted_x;
    return ws;
}

// Largest eigenvalue of M/n through implicit matvecs v -> W^T (LKX v) / n;
// M itself is never formed.
double top_gram_eigenvalue(const FitWorkspace& ws) {
    const Eigen::Index n = ws.y.size();
    const double trace = (ws.weighted_x.array() * ws.lkx.array()).sum() / static_cast<double>(n);
    if (!(trace > 1e-300)) {
        throw DegenerateDataError("estimate_step_constant: all predictors are numerically zero");
    }

    for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
        RandomStream rng(hash_combine(0x5eedface5eedfaceull, attempt));
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform01() - 0.5;
        v.normalize();

        double lambda_prev = 0.0;
        for (int iter = 0; iter < 10000; ++iter) {
            Eigen::VectorXd mv = ws.weighted_x.transpose() * (ws.lkx * v) / static_cast<double>(n);
            const double lambda = v.dot(mv);
            const double norm = mv.norm();
            if (norm <= 0.0) break; // start vector in the null space; retry
            v = mv / norm;
            if (std::abs(lambda - lambda_prev) <= 1e-6 * std::max(std::abs(lambda), 1e-300)) {
                return lambda;
            }
            lambda_prev = lambda;
        }
        if (lambda_prev > 0.0) return lambda_prev;
    }
    throw DegenerateDataError("estimate_step_constant: power iteration failed to find a positive eigenvalue");
}

double weighted_step_norm(const Func& f, const Grid& grid) {
    return std::sqrt((f.array().square() * grid.weights.array()).sum());
}

Estimator gdfl_fit_ws(const FitWorkspace& ws, const FitConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    const Eigen::Index g = ws.grid->size();
    const Eigen::Index n = ws.y.size();

    const double gamma0 = cfg.gamma0 ? *cfg.gamma0 : 0.9 / top_gram_eigenvalue(ws);
    double tol = cfg.tol;
    if (cfg.tol_ref_size > 0.0) tol *= std::sqrt(cfg.tol_ref_size / static_cast<double>(n));

    Estimator est;
    est.beta = Func::Zero(g);
    Eigen::VectorXd resid(n);

    const int limit = cfg.fixed_iterations ? *cfg.fixed_iterations : cfg.max_iter;
    for (int t = 0; t < limit; ++t) {
        resid.noalias() = ws.weighted_x.transpose() * est.beta;
        resid -= ws.y;
        if (cfg.record_risk) est.risk_trace.push_back(resid.squaredNorm() / static_cast<double>(n));

        const double gamma_t = gamma0 / std::pow(static_cast<double>(t + 1), cfg.mu);
        const Func delta = -(gamma_t / static_cast<double>(n)) * (ws.lkx * resid);
        est.beta += delta;
        est.iterations = t + 1;

        const double beta_norm = weighted_step_norm(est.beta, *ws.grid);
        if (beta_norm > kDivergenceGuard) throw DivergedError(t + 1, beta_norm);

        if (!cfg.fixed_iterations && weighted_step_norm(delta, *ws.grid) <= tol) {
            est.converged = true;
            break;
        }
    }
    if (cfg.fixed_iterations) est.converged = true;

    if (cfg.record_risk) {
        resid.noalias() = ws.weighted_x.transpose() * est.beta;
        resid -= ws.y;
        est.risk_trace.push_back(resid.squaredNorm() / static_cast<double>(n));
    }

    est.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return est;
}

} // namespace

namespace detail {

Estimator weighted_average(std::vector<Estimator>&& locals, const std::vector<int>& sizes) {
    const double total = static_cast<double>([&] {
        long long s = 0;
        for (int v : sizes) s += v;
        return s;
    }());

    Estimator est;
    est.beta = (static_cast<double>(sizes[0]) / total) * locals[0].beta;
    est.iterations = locals[0].iterations;
    est.converged = locals[0].converged;
    double time_sum = locals[0].wall_time_seconds;
    for (std::size_t j = 1; j < locals.size(); ++j) {
        est.beta += (static_cast<double>(sizes[j]) / total) * locals[j].beta;
        est.iterations = std::max(est.iterations, locals[j].iterations);
        est.converged = est.converged && locals[j].converged;
        time_sum += locals[j].wall_time_seconds;
    }
    est.wall_time_seconds = time_sum / static_cast<double>(locals.size());
    return est;
}

} // namespace detail

Func gdfl_step(const Func& beta, const Dataset& dataset, const Kernel& kernel, double gamma_t) {
    if (gamma_t < 0.0) throw std::invalid_argument("gdfl_step: stepsize must be nonnegative");
    if (beta.size() != dataset.grid.size()) {
        throw std::invalid_argument("gdfl_step: beta is not on the dataset grid");
    }
    const FitWorkspace ws = build_workspace(dataset, kernel);
    const Eigen::VectorXd resid = ws.weighted_x.transpose() * beta - ws.y;
    return beta - (gamma_t / static_cast<double>(dataset.size())) * (ws.lkx * resid);
}

Estimator gdfl_fit(const Dataset& dataset, const Kernel& kernel, const FitConfig& cfg) {
    validate(cfg);
    return gdfl_fit_ws(build_workspace(dataset, kernel), cfg);
}

Estimator dgdfl_fit(const Partition& partition, const Kernel& kernel, const FitConfig& cfg) {
    validate(cfg);
    if (partition.subsets.empty()) throw std::invalid_argument("dgdfl_fit: empty partition");

    std::vector<Estimator> locals;
    locals.reserve(partition.subsets.size());
    for (std::size_t j = 0; j < partition.subsets.size(); ++j) {
        try {
            locals.push_back(gdfl_fit_ws(build_workspace(partition.subsets[j], kernel), cfg));
        } catch (const DivergedError& e) {
            throw DivergedError(e.iteration, e.norm, static_cast<int>(j));
        }
    }
    return detail::weighted_average(std::move(locals), partition.sizes());
}

Dataset augment_with_unlabeled(const Dataset& labeled, const std::vector<Func>& unlabeled) {
    if (labeled.size() < 1) throw std::invalid_argument("augment_with_unlabeled: empty labeled set");
    const int n = labeled.size();
    const int n_star = n + static_cast<int>(unlabeled.size());
    const double scale = static_cast<double>(n_star) / static_cast<double>(n);

    Dataset aug;
    aug.grid = labeled.grid;
    aug.predictors.reserve(n_star);
    aug.responses.reserve(n_star);
    for (int i = 0; i < n; ++i) {
        aug.predictors.push_back(labeled.predictors[i]);
        aug.responses.push_back(scale * labeled.responses[i]);
    }
    for (const Func& x : unlabeled) {
        if (x.size() != labeled.grid.size()) {
            throw std::invalid_argument("augment_with_unlabeled: unlabeled predictor not on the grid");
        }
        aug.predictors.push_back(x);
        aug.responses.push_back(0.0);
    }
    return aug;
}

Estimator semi_dgdfl_fit(const Partition& partition, const UnlabeledPool& pool, const Kernel& kernel,
                         const FitConfig& cfg) {
    validate(cfg);
    if (partition.subsets.empty()) throw std::invalid_argument("semi_dgdfl_fit: empty partition");
    if (pool.machines() != partition.machines()) {
        throw std::invalid_argument("semi_dgdfl_fit: pool has " + std::to_string(pool.machines()) +
                                    " machines, partition has " + std::to_string(partition.machines()));
    }

    std::vector<Estimator> locals;
    std::vector<int> sizes;
    locals.reserve(partition.subsets.size());
    sizes.reserve(partition.subsets.size());
    for (std::size_t j = 0; j < partition.subsets.size(); ++j) {
        const Dataset aug = augment_with_unlabeled(partition.subsets[j], pool.predictors[j]);
        sizes.push_back(aug.size());
        try {
            locals.push_back(gdfl_fit_ws(build_workspace(aug, kernel), cfg));
        } catch (const DivergedError& e) {
            throw DivergedError(e.iteration, e.norm, static_cast<int>(j));
        }
    }
    return detail::weighted_average(std::move(locals), sizes);
}

double estimate_step_constant(const Dataset& dataset, const Kernel& kernel) {
    return 0.9 / top_gram_eigenvalue(build_workspace(dataset, kernel));
}

} // namespace funclearn
