#include "funclearn/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "funclearn/ridge.hpp"

namespace funclearn {

double predict(const Func& beta, const Func& x, const Grid& grid) { return inner(beta, x, grid); }

double predict(const Estimator& estimator, const Func& x, const Grid& grid) {
    return inner(estimator.beta, x, grid);
}

double estimation_error(const Func& beta_hat, const Func& beta_star, const Grid& grid) {
    if (beta_hat.size() != grid.size() || beta_star.size() != grid.size()) {
        throw std::invalid_argument("estimation_error: function/grid size mismatch");
    }
    return l2_norm(beta_hat - beta_star, grid);
}

double excess_risk(const Func& beta_hat, const Func& beta_star, std::span<const Func> test_predictors,
                   const Grid& grid) {
    if (test_predictors.empty()) throw std::invalid_argument("excess_risk: empty test set");
    const Func diff = beta_hat - beta_star;
    double sum = 0.0;
    for (const Func& x : test_predictors) {
        const double d = predict(diff, x, grid);
        sum += d * d;
    }
    return sum / static_cast<double>(test_predictors.size());
}

std::vector<double> empirical_tck_spectrum(const Dataset& dataset, const Kernel& kernel) {
    const Eigen::MatrixXd m = gram_matrix(dataset, kernel) / static_cast<double>(dataset.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd eigs = solver.eigenvalues();
    std::vector<double> out(eigs.data(), eigs.data() + eigs.size());
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

double effective_dimension(std::span<const double> spectrum, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("effective_dimension: lambda must be positive");
    double sum = 0.0;
    for (double w : spectrum) sum += w / (lambda + w);
    return sum;
}

} // namespace funclearn
