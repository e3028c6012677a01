#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace pinncert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Invalid user-supplied configuration (widths, counts, parameter ranges).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller broke an API precondition (dimension mismatch, wrong stratum, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// A closed-form result cannot be produced from the given inputs
/// (e.g. a norm bound with an unbounded weight set).
struct UnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the requested evaluation.
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown at a specific point (non-finite residual/loss).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pinncert
