#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "layerlab/errors.hpp"

namespace layerlab {

// chi^2 = 3(1 - 2 nu) / (2 (1 - nu)); chi = 0 is the incompressible material.
inline double chi_from_nu(double nu) {
  // nu = -1 is admitted as the auxetic endpoint (chi = 3/2, flagged singular by MaterialParams)
  if (!(nu >= -1.0 && nu <= 0.5))
    throw DomainError("chi_from_nu: nu must lie in [-1, 1/2], got " + std::to_string(nu));
  const double c2 = 3.0 * (1.0 - 2.0 * nu) / (2.0 * (1.0 - nu));
  return std::sqrt(c2 > 0.0 ? c2 : 0.0);
}

inline double nu_from_chi(double chi) {
  if (!(chi >= 0.0 && chi <= 1.5))
    throw DomainError("nu_from_chi: chi must lie in [0, 3/2], got " + std::to_string(chi));
  const double c2 = chi * chi;
  return (3.0 - 2.0 * c2) / (6.0 - 2.0 * c2);
}

struct MaterialParams {
  double nu = 0.5;
  double chi = 0.0;
  double mu = 1.0;
  double lambda = std::numeric_limits<double>::infinity();
  double youngs = 3.0;
  bool lambda_infinite = true;
  bool youngs_singular = false;  // chi = 3/2 (nu = -1): E = 0

  static MaterialParams from_nu(double nu, double mu = 1.0) {
    if (!(mu > 0.0)) throw DomainError("MaterialParams: mu must be positive");
    MaterialParams m;
    m.nu = nu;
    m.chi = chi_from_nu(nu);
    m.mu = mu;
    m.youngs = 2.0 * mu * (1.0 + nu);
    m.lambda_infinite = (nu == 0.5);
    m.lambda = m.lambda_infinite ? std::numeric_limits<double>::infinity()
                                 : 2.0 * mu * nu / (1.0 - 2.0 * nu);
    m.youngs_singular = (nu == -1.0);
    return m;
  }

  // Built from chi so that chi-dependent expressions stay exact (no round trip through nu).
  static MaterialParams from_chi(double chi, double mu = 1.0) {
    if (!(mu > 0.0)) throw DomainError("MaterialParams: mu must be positive");
    MaterialParams m;
    m.nu = nu_from_chi(chi);
    m.chi = chi;
    m.mu = mu;
    const double c2 = chi * chi;
    m.youngs = mu * (9.0 - 4.0 * c2) / (3.0 - c2);
    m.lambda_infinite = (chi == 0.0);
    m.lambda = m.lambda_infinite ? std::numeric_limits<double>::infinity()
                                 : mu * (3.0 - 2.0 * c2) / c2;
    m.youngs_singular = (chi == 1.5);
    return m;
  }

  // mu / lambda; zero for the incompressible material
  double mu_over_lambda() const { return lambda_infinite ? 0.0 : mu / lambda; }
};

enum class Geometry { plate, sphere };

inline const char* to_string(Geometry g) { return g == Geometry::plate ? "plate" : "sphere"; }

struct LayerConfig {
  Geometry kind = Geometry::plate;
  double a = 1.0;
  double h = 0.01;
  double xi = 0.01;
  double U = 1.0;
  double mu = 1.0;

  static LayerConfig make(Geometry kind, double a, double h, double U = 1.0, double mu = 1.0) {
    if (!(a > 0.0) || !(h > 0.0) || !(mu > 0.0))
      throw DomainError("LayerConfig: a, h and mu must be positive");
    LayerConfig c{kind, a, h, h / a, U, mu};
    if (!(c.xi < 1.0)) throw DomainError("LayerConfig: layer must be thin (h < a)");
    return c;
  }
  static LayerConfig from_xi(Geometry kind, double xi, double a = 1.0, double U = 1.0,
                             double mu = 1.0) {
    if (!(xi > 0.0 && xi < 1.0)) throw DomainError("LayerConfig: xi must lie in (0, 1)");
    if (!(a > 0.0) || !(mu > 0.0)) throw DomainError("LayerConfig: a and mu must be positive");
    return LayerConfig{kind, a, xi * a, xi, U, mu};
  }
};

struct ZetaFamily {
  double zeta = std::numeric_limits<double>::infinity();
  double zeta_bar = std::numeric_limits<double>::infinity();
  double zeta_tilde = std::numeric_limits<double>::infinity();
  bool infinite = true;
};

inline ZetaFamily zeta_family(double xi, double chi) {
  if (!(xi > 0.0)) throw DomainError("zeta_family: xi must be positive");
  if (!(chi >= 0.0)) throw DomainError("zeta_family: chi must be non-negative");
  ZetaFamily z;
  if (chi == 0.0) return z;
  z.infinite = false;
  z.zeta = xi / chi;
  z.zeta_bar = std::sqrt(xi) / chi;
  z.zeta_tilde = std::sqrt(std::sqrt(xi)) / chi;
  return z;
}

}  // namespace layerlab
