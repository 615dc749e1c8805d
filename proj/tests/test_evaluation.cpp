#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funclearn/metrics.hpp"
#include "funclearn/ridge.hpp"
#include "funclearn/rng.hpp"
#include "funclearn/simulation.hpp"

using namespace funclearn;

namespace {

std::vector<double> sim1_kernel_weights(int terms) {
    std::vector<double> w(terms);
    for (int k = 1; k <= terms; ++k) w[k - 1] = 2.0 / std::pow(k * M_PI, 4.0);
    return w;
}

} // namespace

TEST_CASE("predict: orthonormal modes and bilinearity") {
    const Grid grid = make_uniform_grid(201);
    const Func phi1 = cosine_basis(1, grid);
    const Func phi2 = cosine_basis(2, grid);

    CHECK(predict(Func::Zero(grid.size()), phi1, grid) == 0.0);
    CHECK(std::abs(predict(phi1, phi1, grid) - 1.0) < 1e-12);
    CHECK(std::abs(predict(phi1, phi2, grid)) < 1e-12);

    const Func x = 0.3 * phi1 + 1.7 * phi2;
    const double lhs = predict(2.0 * phi1 - 5.0 * phi2, x, grid);
    const double rhs = 2.0 * predict(phi1, x, grid) - 5.0 * predict(phi2, x, grid);
    CHECK(std::abs(lhs - rhs) < 1e-12);

    Estimator est;
    est.beta = phi1;
    CHECK(predict(est, phi1, grid) == predict(phi1, phi1, grid));

    CHECK_THROWS_AS(predict(phi1, Func::Ones(5), grid), std::invalid_argument);
}

TEST_CASE("estimation_error: unit basis offsets") {
    const Grid grid = make_uniform_grid(201);
    Sim1Config cfg;
    cfg.grid = grid;
    const Func beta = beta_star_sim1(cfg);

    CHECK(estimation_error(beta, beta, grid) == 0.0);
    CHECK(std::abs(estimation_error(beta + cosine_basis(1, grid), beta, grid) - 1.0) < 1e-12);
    CHECK(std::abs(estimation_error(beta + 2.0 * cosine_basis(3, grid), beta, grid) - 2.0) < 1e-12);
    CHECK_THROWS_AS(estimation_error(Func::Ones(5), beta, grid), std::invalid_argument);
}

TEST_CASE("excess_risk: exact cases") {
    const Grid grid = make_uniform_grid(201);
    const Func phi2 = cosine_basis(2, grid);
    const std::vector<Func> single_test = {phi2};

    CHECK(excess_risk(phi2, phi2, single_test, grid) == 0.0);

    const Func beta_hat = phi2 + phi2; // difference is exactly phi_2
    CHECK(std::abs(excess_risk(beta_hat, phi2, single_test, grid) - 1.0) < 1e-12);

    CHECK_THROWS_AS(excess_risk(phi2, phi2, std::vector<Func>{}, grid), std::invalid_argument);
}

TEST_CASE("excess_risk: Monte Carlo second moment of the first score") {
    // beta_hat - beta_star = phi_1, so the excess risk is E<X, phi_1>^2 = 1.
    Sim1Config cfg;
    cfg.grid = make_uniform_grid(201);
    const Func beta = beta_star_sim1(cfg);
    const Func beta_hat = beta + cosine_basis(1, cfg.grid);

    RandomStream rng(4242);
    std::vector<Func> test;
    test.reserve(100000);
    for (int i = 0; i < 100000; ++i) test.push_back(gen_predictor_sim1(cfg, rng));

    CHECK(std::abs(excess_risk(beta_hat, beta, test, cfg.grid) - 1.0) < 0.03);
}

TEST_CASE("empirical_tck_spectrum: rank-one cases and PSD") {
    const Grid grid = make_uniform_grid(201);
    const Kernel kernel = CosineSeriesKernel{sim1_kernel_weights(300)};

    Dataset d;
    d.grid = grid;
    d.predictors.push_back(cosine_basis(1, grid));
    d.responses.push_back(1.0);
    const auto spectrum = empirical_tck_spectrum(d, kernel);
    REQUIRE(spectrum.size() == 1);
    CHECK(spectrum[0] == doctest::Approx(std::pow(M_PI, -4.0)).epsilon(1e-10));

    d.predictors.push_back(d.predictors[0]);
    d.responses.push_back(1.0);
    const auto dup = empirical_tck_spectrum(d, kernel);
    REQUIRE(dup.size() == 2);
    CHECK(dup[0] == doctest::Approx(std::pow(M_PI, -4.0)).epsilon(1e-10));
    CHECK(std::abs(dup[1]) < 1e-14);

    Sim2Config cfg;
    cfg.grid = grid;
    RandomStream rng(64);
    const Dataset sample = gen_dataset(cfg, 40, rng);
    const auto spec = empirical_tck_spectrum(sample, GaussianKernel{0.33});
    CHECK(spec.size() == 40);
    for (double v : spec) CHECK(v >= -1e-10);
    for (std::size_t i = 1; i < spec.size(); ++i) CHECK(spec[i] <= spec[i - 1]);
}

TEST_CASE("empirical spectrum approaches the analytic eigenvalues (n = 2000)") {
    Sim1Config cfg;
    cfg.grid = make_uniform_grid(201);
    RandomStream rng(2718);
    const Dataset d = gen_dataset(cfg, 2000, rng);
    const auto spectrum = empirical_tck_spectrum(d, BernoulliQuarticKernel{});
    REQUIRE(spectrum.size() >= 5);
    for (int k = 1; k <= 5; ++k) {
        const double analytic = std::pow(k * M_PI, -4.0) * std::pow(static_cast<double>(k), -1.0);
        CHECK(std::abs(spectrum[k - 1] - analytic) / analytic < 0.10);
    }
}

TEST_CASE("effective_dimension") {
    const std::vector<double> two = {1.0, 0.5};
    CHECK(effective_dimension(two, 0.5) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));

    CHECK(effective_dimension(std::vector<double>{}, 1.0) == 0.0);
    CHECK(effective_dimension(two, 1e12) <= 1e-10);
    CHECK_THROWS_AS(effective_dimension(two, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_dimension(two, -1.0), std::invalid_argument);

    // Strictly decreasing in lambda.
    const std::vector<double> spectrum = {2.0, 0.7, 0.1, 0.01};
    double prev = effective_dimension(spectrum, 1e-6);
    for (double lambda : {1e-4, 1e-2, 1.0, 100.0}) {
        const double next = effective_dimension(spectrum, lambda);
        CHECK(next < prev);
        prev = next;
    }
}
