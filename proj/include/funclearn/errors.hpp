#pragma once

#include <stdexcept>
#include <string>

namespace funclearn {

/// Iteration left the admissible region (L2 norm above the divergence guard).
class DivergedError : public std::runtime_error {
public:
    DivergedError(int iteration, double norm, int machine = -1)
        : std::runtime_error((machine >= 0 ? "machine " + std::to_string(machine) + ": " : std::string()) +
                             "gradient iteration diverged at step " + std::to_string(iteration) +
                             " (L2 norm " + std::to_string(norm) + ")"),
          iteration(iteration),
          norm(norm),
          machine(machine) {}

    int iteration;
    double norm;
    int machine;
};

/// All predictors are identically zero; no step constant can be estimated.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear solve failed beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double condition_estimate)
        : std::runtime_error(what + " (condition estimate " + std::to_string(condition_estimate) + ")"),
          condition_estimate(condition_estimate) {}

    double condition_estimate;
};

/// Invalid experiment configuration (bad key, bad value, violated invariant).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace funclearn
