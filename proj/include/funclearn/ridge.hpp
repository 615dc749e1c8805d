#pragma once

#include <Eigen/Core>

#include "funclearn/dataset.hpp"
#include "funclearn/fit.hpp"
#include "funclearn/kernel.hpp"

namespace funclearn {

struct RidgeConfig {
    double lambda = 1e-4;
};

/// Gram matrix of the representer system: M_ij = <X_i, L_K X_j>.
Eigen::MatrixXd gram_matrix(const Dataset& dataset, const Kernel& kernel);

/// Regularized least squares through the representer system
/// (M + n lambda I) c = y, beta = sum_i c_i L_K X_i.
Estimator rls_fit(const Dataset& dataset, const Kernel& kernel, const RidgeConfig& cfg);

/// Local ridge solves averaged with weights |D_j| / |D|.
Estimator drk_fit(const Partition& partition, const Kernel& kernel, const RidgeConfig& cfg);

} // namespace funclearn
