#include "funclearn/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "funclearn/errors.hpp"

namespace funclearn {

namespace {

constexpr double kScoreHalfWidth = 1.7320508075688772; // sqrt(3), unit-variance uniform scores

void validate(const Sim1Config& cfg) {
    if (cfg.n_modes < 1) throw std::invalid_argument("Sim1Config: n_modes must be >= 1");
    if (!(cfg.alpha_pred > 0.0)) throw std::invalid_argument("Sim1Config: alpha_pred must be positive");
    if (cfg.theta < 0.0) throw std::invalid_argument("Sim1Config: theta must be nonnegative");
    if (cfg.sigma < 0.0) throw std::invalid_argument("Sim1Config: sigma must be nonnegative");
    if (cfg.grid.size() < 3) throw std::invalid_argument("Sim1Config: grid not initialized");
}

void validate(const Sim2Config& cfg) {
    if (cfg.n_modes < 1) throw std::invalid_argument("Sim2Config: n_modes must be >= 1");
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("Sim2Config: nu must be positive");
    if (cfg.sigma < 0.0) throw std::invalid_argument("Sim2Config: sigma must be nonnegative");
    if (cfg.grid.size() < 3) throw std::invalid_argument("Sim2Config: grid not initialized");
}

// Columns are the predictor modes with sign and decay folded in, so a
// predictor is one matrix-vector product with its score vector.
Eigen::MatrixXd sim1_mode_matrix(const Sim1Config& cfg) {
    const Eigen::Index g = cfg.grid.size();
    Eigen::MatrixXd modes(g, cfg.n_modes);
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k <= cfg.n_modes; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        const double coeff = sign * std::pow(static_cast<double>(k), -cfg.alpha_pred) * sqrt2;
        modes.col(k - 1) = coeff * (k * M_PI * cfg.grid.points.array()).cos();
    }
    return modes;
}

Eigen::MatrixXd sim2_mode_matrix(const Sim2Config& cfg) {
    const Eigen::Index g = cfg.grid.size();
    Eigen::MatrixXd modes(g, cfg.n_modes);
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k <= cfg.n_modes; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        const double coeff = sign * std::pow(static_cast<double>(k), -cfg.nu / 2.0);
        if (k == 1) {
            modes.col(0).setConstant(coeff); // phi_1 = 1
        } else {
            modes.col(k - 1) = coeff * sqrt2 * ((k - 1) * M_PI * cfg.grid.points.array()).cos();
        }
    }
    return modes;
}

Eigen::VectorXd draw_scores(int n_modes, RandomStream& rng) {
    Eigen::VectorXd z(n_modes);
    for (int k = 0; k < n_modes; ++k) z[k] = rng.uniform(-kScoreHalfWidth, kScoreHalfWidth);
    return z;
}

Func predictor_from(const Eigen::MatrixXd& modes, std::span<const double> scores) {
    if (static_cast<Eigen::Index>(scores.size()) != modes.cols()) {
        throw std::invalid_argument("predictor scores: expected " + std::to_string(modes.cols()) +
                                    " entries, got " + std::to_string(scores.size()));
    }
    return modes * Eigen::Map<const Eigen::VectorXd>(scores.data(), modes.cols());
}

template <class Config>
Dataset gen_dataset_impl(const Config& cfg, const Eigen::MatrixXd& modes, const Func& beta, int n,
                         RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("gen_dataset: need n >= 1, got " + std::to_string(n));
    Dataset d;
    d.grid = cfg.grid;
    d.predictors.reserve(n);
    d.responses.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd z = draw_scores(cfg.n_modes, rng);
        Func x = modes * z;
        const double y = inner(x, beta, cfg.grid) + rng.gaussian(0.0, cfg.sigma);
        d.predictors.push_back(std::move(x));
        d.responses.push_back(y);
    }
    return d;
}

template <class Config>
UnlabeledPool gen_unlabeled_impl(const Config& cfg, const Eigen::MatrixXd& modes, std::span<const int> counts,
                                 RandomStream& rng) {
    UnlabeledPool pool;
    pool.predictors.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] < 0) throw std::invalid_argument("gen_unlabeled: negative count for machine " +
                                                       std::to_string(j));
        pool.predictors[j].reserve(counts[j]);
        for (int i = 0; i < counts[j]; ++i) {
            pool.predictors[j].push_back(modes * draw_scores(cfg.n_modes, rng));
        }
    }
    return pool;
}

} // namespace

Func sim1_predictor_from_scores(const Sim1Config& cfg, std::span<const double> scores) {
    validate(cfg);
    return predictor_from(sim1_mode_matrix(cfg), scores);
}

Func sim2_predictor_from_scores(const Sim2Config& cfg, std::span<const double> scores) {
    validate(cfg);
    return predictor_from(sim2_mode_matrix(cfg), scores);
}

Func gen_predictor_sim1(const Sim1Config& cfg, RandomStream& rng) {
    validate(cfg);
    return sim1_mode_matrix(cfg) * draw_scores(cfg.n_modes, rng);
}

Func gen_predictor_sim2(const Sim2Config& cfg, RandomStream& rng) {
    validate(cfg);
    return sim2_mode_matrix(cfg) * draw_scores(cfg.n_modes, rng);
}

Func beta_star_sim1(const Sim1Config& cfg) {
    validate(cfg);
    // K and the covariance diagonalize together on the sqrt(2) cos(k pi x)
    // modes, with eigenvalues (k pi)^-4 and k^-2alpha; the composite-operator
    // power is the plain power of the eigenvalue product.
    const Eigen::Index g = cfg.grid.size();
    const double sqrt2 = std::sqrt(2.0);
    Func beta = Func::Zero(g);
    for (int k = 1; k <= cfg.n_modes; ++k) {
        const double kpi = k * M_PI;
        const double t_eig = std::pow(kpi, -4.0) * std::pow(static_cast<double>(k), -2.0 * cfg.alpha_pred);
        const double coeff = 4.0 * M_PI * M_PI * std::pow(kpi, -2.0) * std::pow(t_eig, cfg.theta);
        beta += coeff * sqrt2 * (k * M_PI * cfg.grid.points.array()).cos().matrix();
    }
    return beta;
}

Func beta_star_sim2(const Grid& grid) {
    Func beta = Func::Zero(grid.size());
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k <= 50; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        const double coeff = 4.0 * sign / (static_cast<double>(k) * k);
        if (k == 1) {
            beta.array() += coeff;
        } else {
            beta += coeff * sqrt2 * ((k - 1) * M_PI * grid.points.array()).cos().matrix();
        }
    }
    return beta;
}

Dataset gen_dataset(const Sim1Config& cfg, int n, RandomStream& rng) {
    validate(cfg);
    return gen_dataset_impl(cfg, sim1_mode_matrix(cfg), beta_star_sim1(cfg), n, rng);
}

Dataset gen_dataset(const Sim2Config& cfg, int n, RandomStream& rng) {
    validate(cfg);
    return gen_dataset_impl(cfg, sim2_mode_matrix(cfg), beta_star_sim2(cfg.grid), n, rng);
}

Partition partition(const Dataset& dataset, int m, RandomStream& rng) {
    const int n = dataset.size();
    if (m < 1 || m > n) {
        throw std::invalid_argument("partition: need 1 <= m <= " + std::to_string(n) + ", got " +
                                    std::to_string(m));
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }

    Partition part;
    part.subsets.reserve(m);
    const int base = n / m;
    const int remainder = n % m;
    int offset = 0;
    for (int j = 0; j < m; ++j) {
        const int block = base + (j < remainder ? 1 : 0);
        Dataset sub;
        sub.grid = dataset.grid;
        sub.predictors.reserve(block);
        sub.responses.reserve(block);
        for (int i = 0; i < block; ++i) {
            const int idx = order[offset + i];
            sub.predictors.push_back(dataset.predictors[idx]);
            sub.responses.push_back(dataset.responses[idx]);
        }
        part.subsets.push_back(std::move(sub));
        offset += block;
    }
    return part;
}

UnlabeledPool gen_unlabeled(const Sim1Config& cfg, std::span<const int> counts, RandomStream& rng) {
    validate(cfg);
    return gen_unlabeled_impl(cfg, sim1_mode_matrix(cfg), counts, rng);
}

UnlabeledPool gen_unlabeled(const Sim2Config& cfg, std::span<const int> counts, RandomStream& rng) {
    validate(cfg);
    return gen_unlabeled_impl(cfg, sim2_mode_matrix(cfg), counts, rng);
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_dataset_csv: cannot open " + path);
    const Eigen::Index g = dataset.grid.size();

    out << "y";
    char label[32];
    for (Eigen::Index j = 0; j < g; ++j) {
        std::snprintf(label, sizeof(label), ",x%03lld", static_cast<long long>(j));
        out << label;
    }
    out << "\n";

    char value[64];
    for (int i = 0; i < dataset.size(); ++i) {
        std::snprintf(value, sizeof(value), "%.17g", dataset.responses[i]);
        out << value;
        for (Eigen::Index j = 0; j < g; ++j) {
            std::snprintf(value, sizeof(value), ",%.17g", dataset.predictors[i][j]);
            out << value;
        }
        out << "\n";
    }
    if (!out) throw IoError("write_dataset_csv: write failed for " + path);
}

Dataset load_dataset_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("load_dataset_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line.rfind("y,", 0) != 0) {
        throw IoError("load_dataset_csv: missing header in " + path);
    }

    Dataset d;
    d.grid = grid;
    const Eigen::Index g = grid.size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        if (!std::getline(ss, field, ',')) break;
        d.responses.push_back(std::stod(field));
        Func x(g);
        Eigen::Index j = 0;
        while (std::getline(ss, field, ',')) {
            if (j >= g) throw IoError("load_dataset_csv: too many columns in " + path);
            x[j++] = std::stod(field);
        }
        if (j != g) throw IoError("load_dataset_csv: expected " + std::to_string(g) +
                                             " predictor columns, got " + std::to_string(j));
        d.predictors.push_back(std::move(x));
    }
    return d;
}

} // namespace funclearn
