#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "funclearn/grid.hpp"

namespace funclearn {

/// K(x,y) = sum_k w_k cos(k pi x) cos(k pi y), k = 1..weights.size().
/// Weights must be positive.
struct CosineSeriesKernel {
    std::vector<double> weights;
};

/// K(x,y) = -(1/3) B4(|x-y|/2) - (1/3) B4((x+y)/2), the closed form of the
/// cosine series with w_k = 2/(k pi)^4.
struct BernoulliQuarticKernel {};

/// K(x,y) = exp(-(x-y)^2 / (2 h^2)).
struct GaussianKernel {
    double bandwidth;
};

/// Kernel given explicitly by its values on a grid; queries must hit grid points.
struct GridMatrixKernel {
    GridMatrixKernel(Grid grid, Eigen::MatrixXd values);

    Grid grid;
    Eigen::MatrixXd values;
};

using Kernel = std::variant<CosineSeriesKernel, BernoulliQuarticKernel, GaussianKernel, GridMatrixKernel>;

/// Quartic Bernoulli polynomial x^4 - 2x^3 + x^2 - 1/30.
double b4(double x);

double kernel_eval(const Kernel& kernel, double x, double y);

/// Dense kernel matrix on the grid product; symmetric by construction.
Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Grid& grid);

/// Integral operator (L_R f)(x) = integral R(x, y) f(y) dy, discretized by the
/// grid quadrature.
Func apply_kernel_operator(const Kernel& kernel, const Func& f, const Grid& grid);

/// Double integral <Xi, L_K Xj> = integral integral Xi(x) K(x,y) Xj(y) dx dy.
double gram_entry(const Func& xi, const Kernel& kernel, const Func& xj, const Grid& grid);

/// Same contraction against a prebuilt kernel matrix; used by the batched paths.
double gram_entry(const Func& xi, const Eigen::MatrixXd& kernel_mat, const Func& xj, const Grid& grid);

} // namespace funclearn
