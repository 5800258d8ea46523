#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ctqw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A textual spec (graph, marked set, gamma, edge-list file) could not be parsed.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The two-eigenvalue framework cannot be applied to the instance
// (no qualifying lambda+, non-positive epsilon^2, ...).
class InapplicableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: bracketing, convergence, eigensolver.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctqw
