#pragma once

#include <stdexcept>

namespace codazzi {

// A scenario hypothesis does not hold (degenerate tensor, Codazzi gate,
// zero Dirac eigenvalue, infeasible (p,q), ...). CLI exit code 1.
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed configuration or field input. CLI exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown (eigensolver failure, singular pointwise solve, ...).
// CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace codazzi
