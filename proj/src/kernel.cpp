#include "funclearn/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace funclearn {

GridMatrixKernel::GridMatrixKernel(Grid g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.rows() != grid.size() || values.cols() != grid.size()) {
        throw std::invalid_argument("GridMatrixKernel: matrix shape does not match the grid");
    }
    const double asym = (values - values.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) {
        throw std::invalid_argument("GridMatrixKernel: matrix asymmetry " + std::to_string(asym) +
                                    " exceeds 1e-12");
    }
}

double b4(double x) {
    const double x2 = x * x;
    return x2 * x2 - 2.0 * x2 * x + x2 - 1.0 / 30.0;
}

namespace {

Eigen::Index grid_index_of(const Grid& grid, double x, const char* where) {
    // Grid points are sorted; tolerance covers round-off in callers.
    const auto& p = grid.points;
    Eigen::Index lo = 0, hi = p.size() - 1;
    while (lo <= hi) {
        const Eigen::Index mid = (lo + hi) / 2;
        if (std::abs(p[mid] - x) <= 1e-12) return mid;
        if (p[mid] < x)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    throw std::invalid_argument(std::string(where) + ": query point " + std::to_string(x) +
                                " is not a grid point");
}

void check_cosine_weights(const CosineSeriesKernel& k) {
    for (double w : k.weights) {
        if (!(w > 0.0)) throw std::invalid_argument("CosineSeriesKernel: weights must be positive");
    }
}

} // namespace

double kernel_eval(const Kernel& kernel, double x, double y) {
    struct Visitor {
        double x, y;

        double operator()(const CosineSeriesKernel& k) const {
            check_cosine_weights(k);
            double sum = 0.0;
            for (std::size_t i = 0; i < k.weights.size(); ++i) {
                const double kp = static_cast<double>(i + 1) * M_PI;
                sum += k.weights[i] * std::cos(kp * x) * std::cos(kp * y);
            }
            return sum;
        }

        double operator()(const BernoulliQuarticKernel&) const {
            return -(1.0 / 3.0) * b4(std::abs(x - y) / 2.0) - (1.0 / 3.0) * b4((x + y) / 2.0);
        }

        double operator()(const GaussianKernel& k) const {
            if (!(k.bandwidth > 0.0)) throw std::invalid_argument("GaussianKernel: bandwidth must be positive");
            const double d = x - y;
            return std::exp(-d * d / (2.0 * k.bandwidth * k.bandwidth));
        }

        double operator()(const GridMatrixKernel& k) const {
            const auto i = grid_index_of(k.grid, x, "kernel_eval");
            const auto j = grid_index_of(k.grid, y, "kernel_eval");
            return k.values(i, j);
        }
    };
    return std::visit(Visitor{x, y}, kernel);
}

Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Grid& grid) {
    const Eigen::Index n = grid.size();

    if (const auto* cs = std::get_if<CosineSeriesKernel>(&kernel)) {
        // K = C diag(w) C^T with C_{ik} = cos(k pi x_i); one GEMM instead of
        // n^2 series sums, which matters for long series.
        check_cosine_weights(*cs);
        const Eigen::Index terms = static_cast<Eigen::Index>(cs->weights.size());
        Eigen::MatrixXd cosines(n, terms);
        for (Eigen::Index k = 0; k < terms; ++k) {
            cosines.col(k) = (static_cast<double>(k + 1) * M_PI * grid.points.array()).cos();
        }
        Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(cs->weights.data(), terms);
        Eigen::MatrixXd m = cosines * w.asDiagonal() * cosines.transpose();
        return (m + m.transpose()) / 2.0;
    }

    if (const auto* gm = std::get_if<GridMatrixKernel>(&kernel)) {
        if (gm->grid.size() != n || (gm->grid.points - grid.points).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("kernel_matrix: GridMatrixKernel defined on a different grid");
        }
        return gm->values;
    }

    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel_eval(kernel, grid.points[i], grid.points[j]);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

Func apply_kernel_operator(const Kernel& kernel, const Func& f, const Grid& grid) {
    if (f.size() != grid.size()) {
        throw std::invalid_argument("apply_kernel_operator: function/grid size mismatch");
    }
    const Eigen::MatrixXd m = kernel_matrix(kernel, grid);
    return m * (grid.weights.array() * f.array()).matrix();
}

double gram_entry(const Func& xi, const Eigen::MatrixXd& kernel_mat, const Func& xj, const Grid& grid) {
    if (xi.size() != grid.size() || xj.size() != grid.size()) {
        throw std::invalid_argument("gram_entry: function/grid size mismatch");
    }
    const Eigen::VectorXd wxi = (grid.weights.array() * xi.array()).matrix();
    const Eigen::VectorXd wxj = (grid.weights.array() * xj.array()).matrix();
    return wxi.dot(kernel_mat * wxj);
}

double gram_entry(const Func& xi, const Kernel& kernel, const Func& xj, const Grid& grid) {
    return gram_entry(xi, kernel_matrix(kernel, grid), xj, grid);
}

} // namespace funclearn
