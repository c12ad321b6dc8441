#pragma once

#include <stdexcept>
#include <string>

namespace layerlab {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised by the numerical kernels; `best` carries the best available estimate
// (e.g. the achieved residual or a partial integral) when one exists.
struct NumericalError : std::runtime_error {
  enum class Kind { singular_system, tolerance_not_met, max_subdivisions, no_sign_change, grid_too_coarse };
  Kind kind;
  double best;
  NumericalError(Kind k, const std::string& what, double best_estimate = 0.0)
      : std::runtime_error(what), kind(k), best(best_estimate) {}
};

}  // namespace layerlab
