#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/fields.hpp"
#include "layerlab/material.hpp"
#include "layerlab/numerics/bvp.hpp"
#include "layerlab/numerics/quadrature.hpp"
#include "layerlab/numerics/radial.hpp"

namespace layerlab::sphere {

struct SphereGeometry {
  double xi = 0.01;
  double r_edge = 10.0;  // 1/sqrt(xi)
  double gap(double R) const { return 1.0 + 0.5 * R * R; }

  static SphereGeometry from_xi(double xi) { return SphereGeometry{xi, 1.0 / std::sqrt(xi)}; }
};

struct SphereSolution {
  SphereGeometry geo;
  LayerConfig cfg;
  MaterialParams mat;
  RadialSolution A;
  double beta_re = 0.0, beta_im = 0.0;  // beta = sqrt(1 - chi^2/(2 xi))
  std::shared_ptr<const std::vector<double>> B_nodes;  // running integral of -3 g^2 A'
  std::vector<double> nodes;
};

// A'' + (7R^2+2)/(R^3+2R) A' - chi^2/(xi g^2) A = -1/(2 g^3), g = 1 + R^2/2.
// `k2` is chi^2/xi and `src` scales the right-hand side.
inline LinearOde sphere_ode(double k2, double src = 1.0) {
  LinearOde ode;
  ode.p = [](double R) { return (7.0 * R * R + 2.0) / (R * R * R + 2.0 * R); };
  ode.dp = [](double R) {
    const double N = 7.0 * R * R + 2.0, M = R * R * R + 2.0 * R;
    return (14.0 * R * M - N * (3.0 * R * R + 2.0)) / (M * M);
  };
  ode.q = [k2](double R) {
    const double g = 1.0 + 0.5 * R * R;
    return -k2 / (g * g);
  };
  ode.dq = [k2](double R) {
    const double g = 1.0 + 0.5 * R * R;
    return 2.0 * k2 * R / (g * g * g);
  };
  ode.f = [src](double R) {
    const double g = 1.0 + 0.5 * R * R;
    return -0.5 * src / (g * g * g);
  };
  ode.df = [src](double R) {
    const double g = 1.0 + 0.5 * R * R;
    return 1.5 * src * R / (g * g * g * g);
  };
  ode.singular_c = 1.0;
  return ode;
}

// Zero normal-stress resultant on the cylinder R = 1/sqrt(xi). Integrating sigma_rr over
// |Z| <= g exactly (the integrand is quadratic in Z) and dividing by 4g/3 gives
//   g^2 A'' + [3 g R - (3 - 2chi^2) g^2 / (3R)] A' + (3 - 2chi^2)/xi A = 0.
inline EdgeFunctional sphere_edge(double xi, double chi2, double scale = 1.0) {
  const double Re = 1.0 / std::sqrt(xi), g = 1.0 + 0.5 * Re * Re, m = 3.0 - 2.0 * chi2;
  return EdgeFunctional{scale * m / xi, scale * (3.0 * g * Re - m * g * g / (3.0 * Re)), scale * g * g, 0.0};
}

inline SphereSolution solve_sphere(double xi, double chi, const BvpOptions& opt = {}, double a = 1.0,
                                   double U = 1.0, double mu = 1.0) {
  if (!(xi > 0.0 && xi <= 0.1)) throw DomainError("solve_sphere: xi must lie in (0, 0.1]");
  if (!(chi >= 0.0 && chi <= 1.5)) throw DomainError("solve_sphere: chi must lie in [0, 3/2]");
  SphereSolution s;
  s.geo = SphereGeometry::from_xi(xi);
  s.cfg = LayerConfig::from_xi(Geometry::sphere, xi, a, U, mu);
  s.mat = MaterialParams::from_chi(chi, mu);
  const double c2 = chi * chi;
  const std::complex<double> beta = std::sqrt(std::complex<double>(1.0 - c2 / (2.0 * xi), 0.0));
  s.beta_re = beta.real();
  s.beta_im = beta.imag();
  s.A = solve_linear_bvp(sphere_ode(c2 / xi), 0.0, s.geo.r_edge, LeftCondition::regular_at_zero(),
                         sphere_edge(xi, c2), opt);

  s.nodes = s.A.mesh();
  s.nodes.insert(s.nodes.begin(), 0.0);
  auto B = std::make_shared<std::vector<double>>(s.nodes.size(), 0.0);
  const RadialSolution& A = s.A;
  auto a1 = [&A](double R) {
    const double g = 1.0 + 0.5 * R * R;
    return -3.0 * g * g * A(R).dA;
  };
  for (std::size_t i = 1; i < s.nodes.size(); ++i)
    (*B)[i] = (*B)[i - 1] + detail::gk15(a1, s.nodes[i - 1], s.nodes[i]).value;
  s.B_nodes = B;
  return s;
}

// Antiderivative of A1 = -3 g^2 A' from 0 to R.
inline double sphere_B(const SphereSolution& sol, double R) {
  const auto& n = sol.nodes;
  R = std::clamp(R, 0.0, n.back());
  auto it = std::upper_bound(n.begin(), n.end(), R);
  const std::size_t i = std::size_t(it - n.begin()) - 1;
  if (n[i] == R) return (*sol.B_nodes)[i];
  const RadialSolution& A = sol.A;
  auto a1 = [&A](double r) {
    const double g = 1.0 + 0.5 * r * r;
    return -3.0 * g * g * A(r).dA;
  };
  return (*sol.B_nodes)[i] + detail::gk15(a1, n[i], R).value;
}

struct PotentialSample {
  double Phi = 0.0, Phi_R = 0.0, Phi_Z = 0.0, Phi_ZZ = 0.0, Phi_RZ = 0.0;  // scaled derivatives
};

// Phi = xi a^2 U [B(R) Z + A(R) Z^3], odd in Z.
inline PotentialSample sphere_potential(const SphereSolution& sol, double R, double Z) {
  const double k = sol.cfg.xi * sol.cfg.a * sol.cfg.a * sol.cfg.U;
  const auto d = sol.A(R);
  const double g = 1.0 + 0.5 * R * R;
  const double B = sphere_B(sol, R), Bp = -3.0 * g * g * d.dA;
  PotentialSample p;
  p.Phi = k * (B * Z + d.A * Z * Z * Z);
  p.Phi_R = k * (Bp * Z + d.dA * Z * Z * Z);
  p.Phi_Z = k * (B + 3.0 * d.A * Z * Z);
  p.Phi_ZZ = k * 6.0 * d.A * Z;
  p.Phi_RZ = k * (Bp + 3.0 * d.dA * Z * Z);
  return p;
}

namespace detail {

struct Radial {
  double A, dA, d2A, d3A, dA_over_R, LA, dLA;
};

inline Radial radial_terms(const RadialSolution& A, double R) {
  const auto d = A(R);
  Radial r{d.A, d.dA, d.d2A, d.d3A, 0.0, 0.0, 0.0};
  if (R > 0.0) {
    r.dA_over_R = d.dA / R;
    r.LA = d.d2A + r.dA_over_R;
    r.dLA = d.d3A + (R * d.d2A - d.dA) / (R * R);
  } else {
    r.dA_over_R = d.d2A;
    r.LA = 2.0 * d.d2A;
    r.dLA = d.d3A;
  }
  return r;
}

}  // namespace detail

inline FieldSample sphere_field(const SphereSolution& sol, double R, double Z) {
  const double xi = sol.cfg.xi, U = sol.cfg.U, mu = sol.mat.mu, a = sol.cfg.a;
  const double c2 = sol.mat.chi * sol.mat.chi, sxi = std::sqrt(xi);
  const double s = mu * U / (xi * a);
  const double g = 1.0 + 0.5 * R * R, w = g * g - Z * Z;
  const auto r = detail::radial_terms(sol.A, R);
  const double gRA = g * R * r.dA;
  FieldSample o;
  o.R = R;
  o.Z = Z;
  o.u_r = (3.0 - c2) * (U / sxi) * r.dA * w;
  o.u_z = U * (Z * Z * Z * r.LA + Z * (2.0 * c2 * r.A / xi - 3.0 * g * g * r.LA - 6.0 * gRA));
  const double ldiv = -s * (3.0 - 2.0 * c2) * (r.LA * w + 2.0 * gRA - 2.0 * r.A / xi);
  o.s_rr = ldiv + 2.0 * s * (3.0 - c2) * (r.d2A * w + 2.0 * gRA);
  o.s_tt = ldiv + 2.0 * s * (3.0 - c2) * r.dA_over_R * w;
  o.s_zz = ldiv + 2.0 * s * (2.0 * c2 * r.A / xi - 3.0 * r.LA * w - 6.0 * gRA);
  const double d_g2LA = 2.0 * g * R * r.LA + g * g * r.dLA;
  const double d_gRA = R * R * r.dA + g * r.dA + g * R * r.d2A;
  o.s_rz = (s / sxi) * (-2.0 * (3.0 - c2) * r.dA * Z +
                        xi * (Z * Z * Z * r.dLA + Z * (2.0 * c2 * r.dA / xi - 3.0 * d_g2LA - 6.0 * d_gRA)));
  return o;
}

// sigma_zz on the upper surface, divided by mu U / (xi a):  6A/xi - (18 - 4chi^2) g R A'.
inline double sphere_szz_trace(const SphereSolution& sol, double R) {
  const double c2 = sol.mat.chi * sol.mat.chi;
  const auto d = sol.A(R);
  const double g = 1.0 + 0.5 * R * R;
  return 6.0 * d.A / sol.cfg.xi - (18.0 - 4.0 * c2) * g * R * d.dA;
}

struct SphereForce {
  double F = 0.0;
  double Psi = 0.0;
  double abs_err_est = 0.0;
};

// F = 2 pi a^2 xi * int_0^{1/sqrt(xi)} sigma_zz(R, g) R dR = 6 pi a mu U Psi.
inline SphereForce sphere_force(const SphereSolution& sol, double tol = 1e-10) {
  std::vector<double> breaks;
  const auto& n = sol.nodes;
  const std::size_t stride = std::max<std::size_t>(1, n.size() / 512);
  for (std::size_t i = 0; i < n.size(); i += stride) breaks.push_back(n[i]);
  if (breaks.back() != n.back()) breaks.push_back(n.back());
  QuadratureOptions qo;
  qo.rel_tol = tol;
  qo.abs_tol = 0.0;
  const auto q = integrate([&sol](double R) { return sphere_szz_trace(sol, R) * R; }, breaks, qo);
  SphereForce f;
  f.Psi = q.value / 3.0;
  f.abs_err_est = q.abs_err_est / 3.0;
  f.F = 6.0 * std::numbers::pi * sol.cfg.a * sol.mat.mu * sol.cfg.U * f.Psi;
  return f;
}

struct PsiExtremes {
  double Psi_i = 0.0;
  double Psi_c = std::numeric_limits<double>::infinity();
  bool Psi_c_infinite = true;
};

inline PsiExtremes psi_extremes(double xi, double chi) {
  if (!(xi > 0.0)) throw DomainError("psi_extremes: xi must be positive");
  PsiExtremes e;
  e.Psi_i = 1.0 / (4.0 * xi);
  if (chi > 0.0) {
    e.Psi_c = std::log(1.0 / (2.0 * xi)) / (chi * chi);
    e.Psi_c_infinite = false;
  }
  return e;
}

}  // namespace layerlab::sphere
