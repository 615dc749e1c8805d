#include "funclearn/ridge.hpp"

#include <chrono>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "funclearn/errors.hpp"

namespace funclearn {

namespace {

struct RidgeWorkspace {
    Eigen::MatrixXd lkx; // column i = L_K X_i
    Eigen::MatrixXd gram;
    Eigen::VectorXd y;
};

RidgeWorkspace build_workspace(const Dataset& dataset, const Kernel& kernel) {
    if (dataset.size() < 1) throw std::invalid_argument("rls_fit: dataset is empty");
    const Eigen::Index g = dataset.grid.size();
    const int n = dataset.size();

    Eigen::MatrixXd weighted_x(g, n);
    RidgeWorkspace ws;
    ws.y.resize(n);
    for (int i = 0; i < n; ++i) {
        if (dataset.predictors[i].size() != g) {
            throw std::invalid_argument("rls_fit: predictor " + std::to_string(i) +
                                        " not on the dataset grid");
        }
        weighted_x.col(i) = (dataset.grid.weights.array() * dataset.predictors[i].array()).matrix();
        ws.y[i] = dataset.responses[i];
    }
    ws.lkx = kernel_matrix(kernel, dataset.grid) * weighted_x;
    Eigen::MatrixXd m = weighted_x.transpose() * ws.lkx;
    ws.gram = (m + m.transpose()) / 2.0;
    return ws;
}

} // namespace

Eigen::MatrixXd gram_matrix(const Dataset& dataset, const Kernel& kernel) {
    return build_workspace(dataset, kernel).gram;
}

Estimator rls_fit(const Dataset& dataset, const Kernel& kernel, const RidgeConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("rls_fit: lambda must be positive");
    const auto started = std::chrono::steady_clock::now();

    const RidgeWorkspace ws = build_workspace(dataset, kernel);
    const Eigen::Index n = ws.y.size();
    Eigen::MatrixXd system = ws.gram;
    system.diagonal().array() += static_cast<double>(n) * cfg.lambda;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    Eigen::VectorXd c = ldlt.solve(ws.y);
    c += ldlt.solve(ws.y - system * c); // one refinement step

    const double residual = (system * c - ws.y).norm();
    const double bound = 1e-8 * ws.y.norm();
    if (ldlt.info() != Eigen::Success || !c.allFinite() || residual > bound) {
        const Eigen::VectorXd eigs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(system).eigenvalues();
        const double cond = eigs[n - 1] / std::max(eigs[0], 1e-300);
        throw NumericalError("rls_fit: representer solve residual " + std::to_string(residual) +
                                 " exceeds " + std::to_string(bound),
                             cond);
    }

    Estimator est;
    est.beta = ws.lkx * c;
    est.iterations = 0;
    est.converged = true;
    est.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return est;
}

Estimator drk_fit(const Partition& partition, const Kernel& kernel, const RidgeConfig& cfg) {
    if (partition.subsets.empty()) throw std::invalid_argument("drk_fit: empty partition");

    std::vector<Estimator> locals;
    locals.reserve(partition.subsets.size());
    for (std::size_t j = 0; j < partition.subsets.size(); ++j) {
        try {
            locals.push_back(rls_fit(partition.subsets[j], kernel, cfg));
        } catch (const NumericalError& e) {
            throw NumericalError("machine " + std::to_string(j) + ": " + e.what(), e.condition_estimate);
        }
    }
    return detail::weighted_average(std::move(locals), partition.sizes());
}

} // namespace funclearn
