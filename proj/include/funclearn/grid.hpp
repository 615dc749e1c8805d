#pragma once

#include <Eigen/Core>

namespace funclearn {

/// A real function on [0,1] represented by its samples at the grid points.
using Func = Eigen::VectorXd;

/// Discretization of [0,1] with quadrature weights. Weights sum to 1, so the
/// rule integrates the constant function exactly.
struct Grid {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;

    Eigen::Index size() const { return points.size(); }
};

/// Uniform grid of n_points on [0,1] with composite trapezoid weights
/// (interior h, endpoints h/2), normalized to sum exactly 1.
Grid make_uniform_grid(int n_points);

/// Quadrature approximation of the L2(0,1) inner product <f, g>.
double inner(const Func& f, const Func& g, const Grid& grid);

/// L2(0,1) norm of f under the grid quadrature.
double l2_norm(const Func& f, const Grid& grid);

/// Cosine basis: k = 0 is the constant 1, k >= 1 is sqrt(2) cos(k pi x).
/// Orthonormal under the trapezoid rule for all frequencies the grid resolves.
Func cosine_basis(int k, const Grid& grid);

} // namespace funclearn
