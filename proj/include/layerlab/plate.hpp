#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "layerlab/errors.hpp"
#include "layerlab/fields.hpp"
#include "layerlab/material.hpp"
#include "layerlab/numerics/bessel.hpp"
#include "layerlab/numerics/bvp.hpp"
#include "layerlab/numerics/radial.hpp"

namespace layerlab::plate {

// Below this chi the classical incompressible closed forms are used for displacements.
inline constexpr double kIncompressibleChi = 1e-10;

struct StefanFields {
  double v_r = 0.0, v_z = 0.0, p = 0.0;
};

// Squeeze flow of a viscous film between plates approaching at speed V.
inline StefanFields stefan_fluid_fields(double r, double z, double a, double h, double mu, double V) {
  const double h3 = h * h * h;
  return StefanFields{3.0 * r * V * (h * h - z * z) / (4.0 * h3),
                      V * z * (z * z - 3.0 * h * h) / (2.0 * h3),
                      mu * V * (3.0 * a * a + 2.0 * h * h - 3.0 * r * r + 6.0 * z * z) / (4.0 * h3)};
}

// Everything that depends only on (xi, chi). All Bessel content enters through
// h_n(x, R) = [I_n(xR)/(xR)^n]/I_0(x) with x = chi/xi, which never overflows.
struct Kernel {
  double xi = 0.0, chi = 0.0, c2 = 0.0, x = 0.0;
  double h1 = 0.5, h2 = 0.125;  // h_1(x, 1), h_2(x, 1)
  double Dt = 3.0;              // D / I_0(x) = 3 - 2 chi^2 h_1
  double kt = 1.0;              // 3(3 - 2chi^2) / ((3 - chi^2) Dt)

  Kernel() = default;
  Kernel(double xi_, double chi_) : xi(xi_), chi(chi_), c2(chi_ * chi_), x(chi_ / xi_) {
    h1 = bessel_h(1, x);
    h2 = bessel_h(2, x);
    Dt = 3.0 - 2.0 * c2 * h1;
    kt = 3.0 * (3.0 - 2.0 * c2) / ((3.0 - c2) * Dt);
  }

  // (1 - I0(xR)/I0(x)) / chi^2, free of cancellation for small x.
  double one_minus_rho_over_c2(double R, double rho0) const {
    if (x >= 2.0) return (1.0 - rho0) / c2;
    const double i0 = std::exp(x) * detail::scaled_i_over_pow(0, x);
    double sum = 0.0, term = 1.0, xp = 1.0, Rp = 1.0;
    const double R2 = R * R, x2 = x * x;
    for (int k = 1; k < 60; ++k) {
      term *= 0.25 / (double(k) * double(k));
      Rp *= R2;
      const double t = term * xp * (1.0 - Rp);
      sum += t;
      if (std::abs(t) < 1e-18 * std::abs(sum) && k > 2) break;
      xp *= x2;
    }
    return sum / (xi * xi * i0);
  }

  struct Local {
    double rho0, A, dA, dA_over_R, d2A, d3A;
  };

  Local at(double R) const {
    const double h0R = bessel_h(0, x, R), h1R = bessel_h(1, x, R), h2R = bessel_h(2, x, R);
    const double W = one_minus_rho_over_c2(R, h0R);
    const double K0 = kt / (2.0 * xi * xi);
    Local l;
    l.rho0 = h0R;
    l.A = (9.0 * W - 3.0 * (1.0 - 2.0 * h0R) - 2.0 * (3.0 - c2) * h1) / (2.0 * (3.0 - c2) * Dt);
    l.dA_over_R = -K0 * h1R;
    l.dA = l.dA_over_R * R;
    l.d2A = -K0 * 0.5 * (h0R + x * x * R * R * h2R);
    l.d3A = -K0 * x * x * R * (h1R - h2R);
    return l;
  }

  // Bracketed factor of the force, F = 3 pi mu a U / (8 xi^3) * G; G -> 1 as chi -> 0.
  double G() const { return 8.0 * (3.0 * h2 + 2.0 * c2 * xi * xi * h1 / (3.0 - c2)) / Dt; }
};

struct PlateSolution {
  LayerConfig cfg;
  MaterialParams mat;
  BesselRatioEval bessel_edge;
  Kernel kernel;
  bool incompressible = false;
  bool chi_sqrt3_flag = false;  // 3 - chi^2 vanishes (outside the physical range)
};

inline PlateSolution make_plate(const LayerConfig& cfg, const MaterialParams& mat) {
  if (!(cfg.xi > 0.0 && cfg.xi < 1.0)) throw DomainError("plate: xi must lie in (0, 1)");
  if (!(mat.chi >= 0.0 && mat.chi <= 1.5)) throw DomainError("plate: chi must lie in [0, 3/2]");
  PlateSolution s;
  s.cfg = cfg;
  s.cfg.kind = Geometry::plate;
  s.mat = mat;
  s.incompressible = mat.chi < kIncompressibleChi;
  const double chi = s.incompressible ? 0.0 : mat.chi;
  s.kernel = Kernel(cfg.xi, chi);
  s.bessel_edge = bessel_ratio(chi / cfg.xi);
  s.chi_sqrt3_flag = std::abs(chi * chi - 3.0) < 1e-12;
  return s;
}

inline PlateSolution make_plate(double xi, double chi, double a = 1.0, double U = 1.0, double mu = 1.0) {
  return make_plate(LayerConfig::from_xi(Geometry::plate, xi, a, U, mu), MaterialParams::from_chi(chi, mu));
}

// A(R) of the plate problem, A'' + A'/R - (chi/xi)^2 A = -1/(2 xi^2), in closed form.
inline RadialSolution radial_profile(double xi, double chi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("radial_profile: xi must lie in (0, 1)");
  if (!(chi >= 0.0 && chi <= 1.5)) throw DomainError("radial_profile: chi must lie in [0, 3/2]");
  if (chi < kIncompressibleChi) {
    const double k = 1.0 / (8.0 * xi * xi);
    return RadialSolution::closed_form(
        0.0, 1.0,
        [k](double R) { return RadialDerivs{k * (1.0 - R * R), -2.0 * k * R, -2.0 * k, 0.0}; },
        "closed-form-incompressible");
  }
  const Kernel K(xi, chi);
  return RadialSolution::closed_form(0.0, 1.0, [K](double R) {
    const auto l = K.at(R);
    return RadialDerivs{l.A, l.dA, l.d2A, l.d3A};
  });
}

// The same A(R) from the numerical BVP solver, closed by the normal-stress edge resultant.
inline RadialSolution radial_profile_numeric(double xi, double chi, const BvpOptions& opt = {}) {
  const double c2 = chi * chi, x2 = c2 / (xi * xi), src = -0.5 / (xi * xi);
  LinearOde ode;
  ode.p = [](double R) { return 1.0 / R; };
  ode.dp = [](double R) { return -1.0 / (R * R); };
  ode.q = [x2](double) { return -x2; };
  ode.dq = [](double) { return 0.0; };
  ode.f = [src](double) { return src; };
  ode.df = [](double) { return 0.0; };
  ode.singular_c = 1.0;
  // Integrating sigma_rr over the thickness at R = 1:
  //   2 xi^2 (3 - chi^2) A'' + (3 - 2chi^2)(3 - chi^2) A = -(3 - 2chi^2)/2
  EdgeFunctional edge{(3.0 - 2.0 * c2) * (3.0 - c2), 0.0, 2.0 * xi * xi * (3.0 - c2),
                      -0.5 * (3.0 - 2.0 * c2)};
  return solve_linear_bvp(ode, 0.0, 1.0, LeftCondition::regular_at_zero(), edge, opt);
}

inline FieldSample field(const PlateSolution& sol, double R, double Z) {
  const double xi = sol.cfg.xi, U = sol.cfg.U, a = sol.cfg.a, mu = sol.mat.mu;
  const Kernel& K = sol.kernel;
  const double c2 = K.c2, s = mu * U / (xi * a), w = 1.0 - Z * Z;
  const auto l = K.at(R);
  const double half_krho = 0.5 * K.kt * l.rho0;
  FieldSample out;
  out.R = R;
  out.Z = Z;
  if (sol.incompressible) {
    out.u_r = -3.0 * R * w * U / (4.0 * xi);
    out.u_z = Z * (3.0 - Z * Z) * U / 2.0;
  } else {
    out.u_r = xi * U * (3.0 - c2) * l.dA * w;
    out.u_z = U * Z * (1.0 + half_krho * w);
  }
  const double ldiv = s * (3.0 - 2.0 * c2) * (2.0 * l.A + w * half_krho);
  out.s_rr = ldiv + 2.0 * s * xi * xi * (3.0 - c2) * l.d2A * w;
  out.s_tt = ldiv + 2.0 * s * xi * xi * (3.0 - c2) * l.dA_over_R * w;
  out.s_zz = ldiv + 2.0 * s * (3.0 * half_krho * w + 1.0 - 2.0 * half_krho);
  out.s_rz = s * xi * l.dA * (c2 * Z * Z * Z + (c2 - 6.0) * Z);
  return out;
}

inline double force_factor(double xi, double chi) { return Kernel(xi, chi < kIncompressibleChi ? 0.0 : chi).G(); }

inline double force(const PlateSolution& sol) {
  const double xi = sol.cfg.xi;
  return 3.0 * std::numbers::pi * sol.mat.mu * sol.cfg.a * sol.cfg.U / (8.0 * xi * xi * xi) * sol.kernel.G();
}

struct ApparentModuli {
  double E_hat = 0.0;
  double E_hat_i = 0.0;
  double E_hat_c = 0.0;  // infinite at chi = 0
  double E_hat_L = 0.0;
  bool singular = false;  // chi = 3/2: E = 0
};

inline ApparentModuli apparent_modulus(double xi, double chi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("apparent_modulus: xi must lie in (0, 1)");
  if (!(chi >= 0.0 && chi <= 1.5)) throw DomainError("apparent_modulus: chi must lie in [0, 3/2]");
  ApparentModuli m;
  m.E_hat_i = 1.0 / (8.0 * xi * xi);
  if (chi >= 1.5) {
    m.singular = true;
    m.E_hat = m.E_hat_c = m.E_hat_L = std::numeric_limits<double>::infinity();
    return m;
  }
  const Kernel K(xi, chi < kIncompressibleChi ? 0.0 : chi);
  const double c2 = K.c2, den = (9.0 - 4.0 * c2) * K.Dt;
  const double x2h2 = K.x * K.x * K.h2;  // = 1 - 2 h_1, without cancellation
  m.E_hat = (27.0 * K.h2 / (xi * xi) - 9.0 * x2h2 + 6.0 * c2 * K.h1) / den;
  m.E_hat_L = (3.0 - c2) * (9.0 * K.h2 / (xi * xi) + 18.0 * K.h1 - 8.0 * c2 * K.h1) / den;
  m.E_hat_c = c2 > 0.0 ? 3.0 * (3.0 - c2) / (c2 * (9.0 - 4.0 * c2)) : std::numeric_limits<double>::infinity();
  return m;
}

// Leading-order estimate of (E_L - E)/E.
inline double lindsey_difference_estimate(double xi, double chi) {
  const double c2 = chi * chi;
  return -2.0 * chi * (4.0 * c2 * c2 - 24.0 * c2 + 27.0) * xi / (9.0 * (3.0 - c2));
}

struct UniaxialState {
  double s_rr = 0.0, s_tt = 0.0, s_zz = 0.0, s_rz = 0.0;
  double edge_load = 0.0;  // radial traction the corrector problem must apply on R = 1
};

// Compressible limit: uniform uniaxial straining u_z = z U / h plus the edge load that
// cancels its radial stress in the Saint-Venant sense.
inline UniaxialState compressible_superposition(double xi, double chi, double mu, double a, double U) {
  if (!(chi > 0.0)) throw DomainError("compressible_superposition: chi must be positive");
  const double c2 = chi * chi, base = mu * U / (a * xi * c2);
  UniaxialState st;
  st.s_rr = st.s_tt = base * (3.0 - 2.0 * c2);
  st.s_zz = 3.0 * base;
  st.s_rz = 0.0;
  st.edge_load = -st.s_rr;
  return st;
}

}  // namespace layerlab::plate
