#include "funclearn/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace funclearn {

Grid make_uniform_grid(int n_points) {
    if (n_points < 3) {
        throw std::invalid_argument("make_uniform_grid: need at least 3 points, got " +
                                    std::to_string(n_points));
    }
    const int n = n_points;
    Grid grid;
    grid.points.resize(n);
    grid.weights.resize(n);
    const double h = 1.0 / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) {
        grid.points[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        grid.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    grid.weights /= grid.weights.sum();
    return grid;
}

static void check_on_grid(const Func& f, const Grid& grid, const char* where) {
    if (f.size() != grid.size()) {
        throw std::invalid_argument(std::string(where) + ": function has " + std::to_string(f.size()) +
                                    " samples, grid has " + std::to_string(grid.size()) + " points");
    }
}

double inner(const Func& f, const Func& g, const Grid& grid) {
    check_on_grid(f, grid, "inner");
    check_on_grid(g, grid, "inner");
    return (f.array() * g.array() * grid.weights.array()).sum();
}

double l2_norm(const Func& f, const Grid& grid) {
    check_on_grid(f, grid, "l2_norm");
    return std::sqrt((f.array().square() * grid.weights.array()).sum());
}

Func cosine_basis(int k, const Grid& grid) {
    if (k < 0) throw std::invalid_argument("cosine_basis: k must be nonnegative");
    if (k == 0) return Func::Ones(grid.size());
    const double sqrt2 = std::sqrt(2.0);
    return (sqrt2 * (k * M_PI * grid.points.array()).cos()).matrix();
}

} // namespace funclearn
