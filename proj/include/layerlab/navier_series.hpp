#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/numerics/bvp.hpp"
#include "layerlab/numerics/radial.hpp"
#include "layerlab/sphere.hpp"

namespace layerlab::navier {

enum class Regime { compressible, nearly_compressible, nearly_incompressible };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::compressible: return "compressible";
    case Regime::nearly_compressible: return "nearly_compressible";
    default: return "nearly_incompressible";
  }
}

// mu/lambda where the scaled Navier operator changes structure.
inline double nearly_compressible_transition(double xi) { return std::sqrt(xi); }
inline double nearly_incompressible_transition(double xi) { return xi; }

struct SeriesRegime {
  Regime regime = Regime::compressible;
  double mu_over_lambda = 1.0;
  double xi = 0.01;

  // O(1) means mu/lambda >= 10 sqrt(xi); below that the nearer (in log scale) of the two
  // transition ratios decides.
  static SeriesRegime from_ratio(double xi, double mu_over_lambda) {
    if (!(xi > 0.0 && xi < 1.0)) throw DomainError("SeriesRegime: xi must lie in (0, 1)");
    if (!(mu_over_lambda >= 0.0)) throw DomainError("SeriesRegime: mu/lambda must be non-negative");
    SeriesRegime s{Regime::compressible, mu_over_lambda, xi};
    const double t1 = nearly_compressible_transition(xi), t2 = nearly_incompressible_transition(xi);
    if (mu_over_lambda >= 10.0 * t1)
      s.regime = Regime::compressible;
    else if (mu_over_lambda >= std::sqrt(t1 * t2))
      s.regime = Regime::nearly_compressible;
    else
      s.regime = Regime::nearly_incompressible;
    return s;
  }
};

struct Displacement {
  double u_r = 0.0, u_z = 0.0;
};

// Three-term series for mu/lambda = O(1). The cubic correction vanishes on Z = +-g.
inline Displacement compressible_series_fields(double xi, double lambda, double mu, double R, double Z,
                                               double U) {
  const double s = 2.0 + R * R, bracket = 4.0 * Z * Z / (s * s) - 1.0;
  Displacement d;
  d.u_r = std::sqrt(xi) * (lambda + mu) / (2.0 * mu) * R * bracket * U;
  d.u_z = (2.0 * Z / s - xi / 3.0 * (lambda / mu) * ((2.0 - R * R) / s) * bracket * Z) * U;
  return d;
}

// Series for mu/lambda = sqrt(xi), carried to O(sqrt(xi)) in both components: radial and axial
// displacements are of the same order. The sqrt(xi) radial coefficient 5/3 collects the
// feedback of the axial correction through the cross-derivative operator.
inline Displacement nearly_compressible_series_fields(double xi, double R, double Z, double U) {
  const double s = 2.0 + R * R, bracket = 4.0 * Z * Z / (s * s) - 1.0, e = std::sqrt(xi);
  Displacement d;
  d.u_r = 0.5 * R * bracket * (1.0 + 5.0 * e / 3.0) * U;
  d.u_z = (2.0 * Z / s - e / 3.0 * ((2.0 - R * R) / s) * bracket * Z) * U;
  return d;
}

// Leading nearly-incompressible system: Theta = d_Z u_z0 + d_R u_r0 + u_r0/R depends on R only.
struct ThetaSolution {
  double xi = 0.01, U = 1.0;
  RadialSolution Theta;  // carries the factor U

  // u_r0 = -(Theta'/2) (Z^2 - g^2); the physical radial displacement is u_r0/sqrt(xi).
  double u_r0(double R, double Z) const {
    const double g = 1.0 + 0.5 * R * R;
    return -0.5 * Theta(R).dA * (Z * Z - g * g);
  }
  // Odd primitive in Z of Theta - (d_R u_r0 + u_r0/R).
  double u_z0(double R, double Z) const {
    const auto t = Theta(R);
    const double g = 1.0 + 0.5 * R * R;
    const double L = t.d2A + (R > 0.0 ? t.dA / R : t.d2A);
    return t.A * Z + 0.5 * L * (Z * Z * Z / 3.0 - g * g * Z) - t.dA * g * R * Z;
  }
};

// Theta'' + (7R^2+2)/(R^3+2R) Theta' - 12/(R^2+2)^2 Theta = -24 U/(R^2+2)^3, regular at 0,
// closed at R = 1/sqrt(xi) by the sphere edge functional with chi^2 = 3 xi.
inline ThetaSolution solve_theta(double xi, double U, const BvpOptions& opt = {}) {
  if (!(xi > 0.0 && xi <= 0.1)) throw DomainError("solve_theta: xi must lie in (0, 0.1]");
  LinearOde ode;
  ode.p = [](double R) { return (7.0 * R * R + 2.0) / (R * R * R + 2.0 * R); };
  ode.dp = [](double R) {
    const double R2 = R * R;
    return -(7.0 * R2 * R2 - 8.0 * R2 + 4.0) / (R2 * (R2 + 2.0) * (R2 + 2.0));
  };
  ode.q = [](double R) {
    const double s = R * R + 2.0;
    return -12.0 / (s * s);
  };
  ode.dq = [](double R) {
    const double s = R * R + 2.0;
    return 48.0 * R / (s * s * s);
  };
  ode.f = [U](double R) {
    const double s = R * R + 2.0;
    return -24.0 * U / (s * s * s);
  };
  ode.df = [U](double R) {
    const double s = R * R + 2.0;
    return 144.0 * U * R / (s * s * s * s);
  };
  ode.singular_c = 1.0;
  ThetaSolution t;
  t.xi = xi;
  t.U = U;
  t.Theta = solve_linear_bvp(ode, 0.0, 1.0 / std::sqrt(xi), LeftCondition::regular_at_zero(),
                             sphere::sphere_edge(xi, 3.0 * xi), opt);
  return t;
}

using FieldFn = std::function<Displacement(double R, double Z)>;

enum class Scaling { sphere, plate };

struct ResidualGrid {
  Scaling scaling = Scaling::sphere;
  double R_lo = 0.1, R_hi = 1.0;
  double Z_frac = 0.9;  // |Z| <= Z_frac * half-gap
  int nR = 201, nZ = 201;
  double fd_step_factor = 1.0;    // finite-difference step as a fraction of the grid spacing
  double resolution_floor = 1e-6;  // step-halving changes below this (normalised) are accepted
};

struct ResidualNorms {
  double sup_r = 0.0, l2_r = 0.0;  // radial equation, normalised by its largest term
  double sup_z = 0.0, l2_z = 0.0;  // axial equation
  double scale_r = 0.0, scale_z = 0.0;
  double sup() const { return std::max(sup_r, sup_z); }
};

namespace detail {

struct Partials {
  Displacement f, R, RR, Z, ZZ, RZ;
};

inline Partials partials(const FieldFn& u, double R, double Z, double hR, double hZ) {
  auto comb = [](const Displacement& a, double ca, const Displacement& b, double cb) {
    return Displacement{ca * a.u_r + cb * b.u_r, ca * a.u_z + cb * b.u_z};
  };
  Partials p;
  p.f = u(R, Z);
  const auto rp1 = u(R + hR, Z), rm1 = u(R - hR, Z), rp2 = u(R + 2 * hR, Z), rm2 = u(R - 2 * hR, Z);
  const auto zp1 = u(R, Z + hZ), zm1 = u(R, Z - hZ), zp2 = u(R, Z + 2 * hZ), zm2 = u(R, Z - 2 * hZ);
  auto d1 = [&](const Displacement& p2, const Displacement& p1, const Displacement& m1,
                const Displacement& m2, double h) {
    return Displacement{(-p2.u_r + 8 * p1.u_r - 8 * m1.u_r + m2.u_r) / (12 * h),
                        (-p2.u_z + 8 * p1.u_z - 8 * m1.u_z + m2.u_z) / (12 * h)};
  };
  auto d2 = [&](const Displacement& p2, const Displacement& p1, const Displacement& c,
                const Displacement& m1, const Displacement& m2, double h) {
    return Displacement{(-p2.u_r + 16 * p1.u_r - 30 * c.u_r + 16 * m1.u_r - m2.u_r) / (12 * h * h),
                        (-p2.u_z + 16 * p1.u_z - 30 * c.u_z + 16 * m1.u_z - m2.u_z) / (12 * h * h)};
  };
  p.R = d1(rp2, rp1, rm1, rm2, hR);
  p.RR = d2(rp2, rp1, p.f, rm1, rm2, hR);
  p.Z = d1(zp2, zp1, zm1, zm2, hZ);
  p.ZZ = d2(zp2, zp1, p.f, zm1, zm2, hZ);
  const double w[4] = {1.0, -8.0, 8.0, -1.0};
  const double off[4] = {-2.0, -1.0, 1.0, 2.0};
  Displacement rz{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rz = comb(rz, 1.0, u(R + off[i] * hR, Z + off[j] * hZ), w[i] * w[j]);
  p.RZ = Displacement{rz.u_r / (144 * hR * hZ), rz.u_z / (144 * hR * hZ)};
  return p;
}

// Evaluates `terms(partials, R) -> {radial terms..., axial terms...}` over the grid.
template <class Terms>
ResidualNorms grid_norms(const FieldFn& u, double xi, const ResidualGrid& g, double step_factor, Terms&& terms) {
  if (g.nR < 5 || g.nZ < 5) throw DomainError("navier_residual: grid needs at least 5x5 points");
  auto half_gap = [&](double R) { return g.scaling == Scaling::sphere ? 1.0 + 0.5 * R * R : 1.0; };
  (void)xi;
  const double dR = (g.R_hi - g.R_lo) / (g.nR - 1);
  const double hR = dR * step_factor;
  std::vector<std::array<double, 2>> sums;
  sums.reserve(std::size_t(g.nR) * g.nZ);
  double scale_r = 0.0, scale_z = 0.0;
  for (int i = 0; i < g.nR; ++i) {
    const double R = g.R_lo + i * dR;
    const double zmax = g.Z_frac * half_gap(R);
    const double dZ = 2.0 * zmax / (g.nZ - 1);
    const double hZ = dZ * step_factor;
    for (int j = 0; j < g.nZ; ++j) {
      const double Z = -zmax + j * dZ;
      const auto p = partials(u, R, Z, hR, hZ);
      const auto t = terms(p, R);
      double sr = 0.0, sz = 0.0;
      for (double v : t.first) {
        sr += v;
        scale_r = std::max(scale_r, std::abs(v));
      }
      for (double v : t.second) {
        sz += v;
        scale_z = std::max(scale_z, std::abs(v));
      }
      sums.push_back({sr, sz});
    }
  }
  ResidualNorms n;
  n.scale_r = scale_r;
  n.scale_z = scale_z;
  double ssr = 0.0, ssz = 0.0;
  for (const auto& s : sums) {
    n.sup_r = std::max(n.sup_r, std::abs(s[0]));
    n.sup_z = std::max(n.sup_z, std::abs(s[1]));
    ssr += s[0] * s[0];
    ssz += s[1] * s[1];
  }
  const double cnt = double(sums.size());
  n.l2_r = std::sqrt(ssr / cnt);
  n.l2_z = std::sqrt(ssz / cnt);
  if (scale_r > 0.0) {
    n.sup_r /= scale_r;
    n.l2_r /= scale_r;
  }
  if (scale_z > 0.0) {
    n.sup_z /= scale_z;
    n.l2_z /= scale_z;
  }
  return n;
}

template <class Terms>
ResidualNorms checked_norms(const FieldFn& u, double xi, const ResidualGrid& g, Terms&& terms) {
  const auto coarse = grid_norms(u, xi, g, g.fd_step_factor, terms);
  const auto fine = grid_norms(u, xi, g, 0.5 * g.fd_step_factor, terms);
  const double a = coarse.sup(), b = fine.sup();
  if (std::abs(a - b) > g.resolution_floor && std::abs(a - b) > 0.1 * std::max(a, b))
    throw NumericalError(NumericalError::Kind::grid_too_coarse,
                         "navier_residual: grid too coarse (step-halving disagreement above 10%)",
                         std::abs(a - b) / std::max(a, b));
  return fine;
}

}  // namespace detail

// Residual of the scaled axisymmetric Navier equations (multiplied through by xi^2 / lambda
// after scaling). Sphere scaling: r = a sqrt(xi) R, z = a xi Z; plate scaling: r = a R,
// z = a xi Z. Displacements are taken in units of U.
inline ResidualNorms navier_residual(const FieldFn& u, double xi, double mu_over_lambda,
                                     const ResidualGrid& grid = {}) {
  const double m = mu_over_lambda;
  const double sR = grid.scaling == Scaling::sphere ? std::sqrt(xi) : 1.0;
  auto terms = [&](const detail::Partials& p, double R) {
    std::pair<std::array<double, 3>, std::array<double, 3>> t;
    t.first = {m * p.ZZ.u_r, (1.0 + m) * xi / sR * p.RZ.u_z,
               (1.0 + 2.0 * m) * xi * xi / (sR * sR) * (p.RR.u_r + p.R.u_r / R - p.f.u_r / (R * R))};
    t.second = {(1.0 + 2.0 * m) * p.ZZ.u_z, (1.0 + m) * xi / sR * (p.Z.u_r / R + p.RZ.u_r),
                m * xi * xi / (sR * sR) * (p.RR.u_z + p.R.u_z / R)};
    return t;
  };
  return detail::checked_norms(u, xi, grid, terms);
}

// Residual of the leading nearly-incompressible system
//   d_ZZ u_r0 + d_R (d_R u_r0 + u_r0/R + d_Z u_z0) = 0,   d_Z (d_R u_r0 + u_r0/R + d_Z u_z0) = 0.
inline ResidualNorms leading_system_residual(const ThetaSolution& th, const ResidualGrid& grid) {
  FieldFn u = [&th](double R, double Z) { return Displacement{th.u_r0(R, Z), th.u_z0(R, Z)}; };
  auto terms = [](const detail::Partials& p, double R) {
    std::pair<std::array<double, 4>, std::array<double, 3>> t;
    t.first = {p.ZZ.u_r, p.RR.u_r, p.R.u_r / R - p.f.u_r / (R * R), p.RZ.u_z};
    t.second = {p.RZ.u_r, p.Z.u_r / R, p.ZZ.u_z};
    return t;
  };
  return detail::checked_norms(u, th.xi, grid, terms);
}

}  // namespace layerlab::navier
