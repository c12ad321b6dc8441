#pragma once

#include <cmath>
#include <limits>

#include "layerlab/errors.hpp"
#include "layerlab/material.hpp"
#include "layerlab/numerics/bessel.hpp"
#include "layerlab/numerics/roots.hpp"

namespace layerlab::regime {

enum class Label { compressible, intermediate, incompressible };

inline const char* to_string(Label l) {
  switch (l) {
    case Label::compressible: return "compressible";
    case Label::intermediate: return "intermediate";
    default: return "incompressible";
  }
}

// Leading-order E^i/E for plates: I0(1/z) / (8 z^2 [I0(1/z) - 2 z I1(1/z)]) = 1/(8 h_2(1/z)).
inline double plate_ratio_incompressible(double zeta) {
  if (!(zeta > 0.0)) throw DomainError("plate_ratio_incompressible: zeta must be positive");
  if (std::isinf(zeta)) return 1.0;
  return 1.0 / (8.0 * bessel_h(2, 1.0 / zeta));
}

// Leading-order E^c/E for plates: I0(1/z) / [I0(1/z) - 2 z I1(1/z)] = 1/(x^2 h_2(x)), x = 1/z.
inline double plate_ratio_compressible(double zeta) {
  if (!(zeta > 0.0)) throw DomainError("plate_ratio_compressible: zeta must be positive");
  if (std::isinf(zeta)) return std::numeric_limits<double>::infinity();
  const double x = 1.0 / zeta;
  return 1.0 / (x * x * bessel_h(2, x));
}

struct Transitions {
  double zeta_c = 0.0;
  double zeta_i = 0.0;
};

inline Transitions plate_transitions(double tolerance, double root_tol = 1e-12) {
  if (!(tolerance > 0.0 && tolerance < 0.5))
    throw DomainError("plate_transitions: tolerance must lie in (0, 0.5)");
  const double target = 1.0 + tolerance;
  Transitions t;
  t.zeta_c = find_root([&](double z) { return plate_ratio_compressible(z) - target; }, 1e-6, 10.0, root_tol);
  t.zeta_i = find_root([&](double z) { return plate_ratio_incompressible(z) - target; }, 1e-3, 1e4, root_tol);
  return t;
}

// Poisson-ratio interval (nu_lo, nu_hi) of the intermediate plate regime at thinness xi.
struct NuInterval {
  double nu_lo = 0.0, nu_hi = 0.0;
};

inline NuInterval plate_nu_interval(double xi, const Transitions& t) {
  return NuInterval{nu_from_chi(std::min(1.5, xi / t.zeta_c)), nu_from_chi(std::min(1.5, xi / t.zeta_i))};
}

// Sphere thresholds are structural constants, not tolerance-solved.
inline constexpr double kSphereZetaBarIncompressible = 1.0;
inline const double kSphereZetaTildeCompressible = 1.0 / std::sqrt(10.0);
// Relative slack used when comparing against a threshold so that parameters sitting on a
// threshold up to rounding (e.g. xi = 1e-2, chi = 1) take the inclusive branch.
inline constexpr double kTieSlack = 1e-12;

struct RegimeReport {
  Geometry geometry = Geometry::plate;
  double tolerance = 0.1;
  ZetaFamily zeta_family;
  double zeta_c = std::numeric_limits<double>::quiet_NaN();
  double zeta_i = std::numeric_limits<double>::quiet_NaN();
  Label label = Label::intermediate;
};

// For spheres the tolerance argument is recorded but does not move the thresholds.
inline RegimeReport classify(Geometry geometry, double xi, double chi, double tolerance = 0.1) {
  RegimeReport r;
  r.geometry = geometry;
  r.tolerance = tolerance;
  r.zeta_family = zeta_family(xi, chi);
  if (geometry == Geometry::plate) {
    const auto t = plate_transitions(tolerance);
    r.zeta_c = t.zeta_c;
    r.zeta_i = t.zeta_i;
    const double z = r.zeta_family.zeta;
    if (z >= t.zeta_i * (1.0 - kTieSlack))
      r.label = Label::incompressible;
    else if (z <= t.zeta_c * (1.0 + kTieSlack))
      r.label = Label::compressible;
    else
      r.label = Label::intermediate;
  } else {
    const auto& zf = r.zeta_family;
    if (zf.zeta_bar >= kSphereZetaBarIncompressible * (1.0 - kTieSlack))
      r.label = Label::incompressible;
    else if (zf.zeta_tilde <= kSphereZetaTildeCompressible * (1.0 + kTieSlack))
      r.label = Label::compressible;
    else
      r.label = Label::intermediate;
  }
  return r;
}

}  // namespace layerlab::regime
