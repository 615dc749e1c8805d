#pragma once

#include <optional>
#include <vector>

#include "funclearn/dataset.hpp"
#include "funclearn/kernel.hpp"

namespace funclearn {

/// Gradient-descent fit controls. gamma0 unset means "estimate the step
/// constant from the data" (0.9 over the top eigenvalue of the empirical
/// composite operator). With tol_ref_size > 0 the stopping tolerance is
/// scaled per machine: tol * sqrt(tol_ref_size / local_n).
struct FitConfig {
    std::optional<double> gamma0;
    double mu = 0.0;
    double tol = 1e-4;
    int max_iter = 100000;
    std::optional<int> fixed_iterations; // run exactly this many steps, no tol stop
    double tol_ref_size = 0.0;
    bool record_risk = false;
};

/// A fitted slope function plus fit metadata. For the divide-and-conquer
/// fits, wall_time_seconds is the mean per-machine fit time and iterations
/// the maximum over machines.
struct Estimator {
    Func beta;
    int iterations = 0;
    bool converged = false;
    double wall_time_seconds = 0.0;
    std::vector<double> risk_trace; // empirical risk per iterate when record_risk
};

/// One gradient step: beta - gamma_t * (1/n) sum_i (<beta, X_i> - Y_i) L_K X_i.
Func gdfl_step(const Func& beta, const Dataset& dataset, const Kernel& kernel, double gamma_t);

/// Gradient descent from beta_0 = 0 with stepsize gamma0 / (k+1)^mu, stopping
/// when the L2 distance between consecutive iterates drops to tol (or at
/// max_iter, reported via converged = false).
Estimator gdfl_fit(const Dataset& dataset, const Kernel& kernel, const FitConfig& cfg);

/// Independent local fits averaged with weights |D_j| / |D|.
Estimator dgdfl_fit(const Partition& partition, const Kernel& kernel, const FitConfig& cfg);

/// Merge a local labeled set with unlabeled predictors: labeled responses are
/// rescaled by |D_j*| / |D_j|, unlabeled points get response 0.
Dataset augment_with_unlabeled(const Dataset& labeled, const std::vector<Func>& unlabeled);

/// Local fits on the augmented sets, averaged with weights |D_j*| / |D*|.
Estimator semi_dgdfl_fit(const Partition& partition, const UnlabeledPool& pool, const Kernel& kernel,
                         const FitConfig& cfg);

/// 0.9 / lambda_max of the empirical composite operator (equivalently of the
/// scaled Gram matrix M/n), estimated by power iteration to relative
/// tolerance 1e-6.
double estimate_step_constant(const Dataset& dataset, const Kernel& kernel);

namespace detail {

/// Combine local estimators with weights sizes[j] / sum(sizes); iterations of
/// the result is the max over machines, wall time the mean, converged the
/// conjunction. Seeded from machine 0 so m = 1 reproduces its input exactly.
Estimator weighted_average(std::vector<Estimator>&& locals, const std::vector<int>& sizes);

} // namespace detail

} // namespace funclearn
