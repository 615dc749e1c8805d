#pragma once

#include <span>
#include <vector>

#include "funclearn/dataset.hpp"
#include "funclearn/fit.hpp"
#include "funclearn/kernel.hpp"

namespace funclearn {

/// Prediction functional <beta, X>.
double predict(const Func& beta, const Func& x, const Grid& grid);
double predict(const Estimator& estimator, const Func& x, const Grid& grid);

/// L2(0,1) distance between the estimate and the true slope.
double estimation_error(const Func& beta_hat, const Func& beta_star, const Grid& grid);

/// Monte Carlo excess risk: mean of (<beta_hat - beta_star, X>)^2 over the
/// test predictors.
double excess_risk(const Func& beta_hat, const Func& beta_star, std::span<const Func> test_predictors,
                   const Grid& grid);

/// Eigenvalues (descending) of the empirical composite operator, computed as
/// the spectrum of M/n; the two share their nonzero spectrum.
std::vector<double> empirical_tck_spectrum(const Dataset& dataset, const Kernel& kernel);

/// Effective dimension sum_k w_k / (lambda + w_k) of a nonnegative spectrum.
double effective_dimension(std::span<const double> spectrum, double lambda);

} // namespace funclearn
