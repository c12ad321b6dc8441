#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "layerlab/numerics/quadrature.hpp"
#include "layerlab/plate.hpp"
#include "oracles.hpp"

namespace {

using namespace layerlab;

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1)));
  return v;
}

TEST(PlateProfile, MatchesBesselOracle) {
  for (auto [xi, chi] : std::vector<std::pair<double, double>>{{1e-2, 0.5}, {0.1, 1.0}, {1e-2, 1e-3}, {1e-3, 0.5}, {0.05, 1.4}}) {
    const oracle::PlateOracle o(xi, chi);
    const auto A = plate::radial_profile(xi, chi);
    double sA = 0.0, sdA = 0.0;
    for (int i = 0; i <= 100; ++i) {
      sA = std::max(sA, std::abs(o.A(0.01 * i)));
      sdA = std::max(sdA, std::abs(o.dA(0.01 * i)));
    }
    for (int i = 0; i <= 100; ++i) {
      const double R = 0.01 * i;
      const auto d = A(R);
      EXPECT_NEAR(d.A, o.A(R), 1e-10 * sA) << "xi=" << xi << " chi=" << chi << " R=" << R;
      EXPECT_NEAR(d.dA, o.dA(R), 1e-10 * sdA) << "xi=" << xi << " chi=" << chi << " R=" << R;
      EXPECT_NEAR(d.d2A, o.d2A(R), 1e-9 * std::max(std::abs(o.d2A(1.0)), std::abs(o.d2A(0.0))));
    }
  }
}

TEST(PlateProfile, EdgeConstantMatchesPrintedExpression) {
  for (auto [xi, chi] : std::vector<std::pair<double, double>>{{1e-2, 0.5}, {0.1, 1.0}, {0.02, 0.2}}) {
    const double c2 = chi * chi, x = chi / xi;
    const double printed = -3.0 * (3.0 - 2.0 * c2) /
                           (2.0 * c2 * (3.0 - c2) * (3.0 * std::cyl_bessel_i(0.0, x) - 2.0 * xi * chi * std::cyl_bessel_i(1.0, x)));
    EXPECT_NEAR(oracle::PlateOracle(xi, chi).C / printed, 1.0, 1e-12);
  }
}

TEST(PlateProfile, OdeResidualAtMidRadius) {
  const double xi = 1e-2, chi = 0.5, R = 0.5;
  const auto d = plate::radial_profile(xi, chi)(R);
  const double k2 = chi * chi / (xi * xi), src = 0.5 / (xi * xi);
  const double res = d.d2A + d.dA / R - k2 * d.A + src;
  const double scale = std::max({std::abs(d.d2A), std::abs(d.dA / R), std::abs(k2 * d.A), src});
  EXPECT_LE(std::abs(res) / scale, 1e-10);
}

TEST(PlateProfile, ClosedFormAgreesWithNumericalSolve) {
  for (auto method : {BvpMethod::collocation, BvpMethod::imbedding}) {
    BvpOptions opt;
    opt.method = method;
    const auto closed = plate::radial_profile(1e-2, 0.5);
    const auto num = plate::radial_profile_numeric(1e-2, 0.5, opt);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double R = 1e-3 * i;
      diff = std::max(diff, std::abs(closed(R).A - num(R).A));
      scale = std::max(scale, std::abs(closed(R).A));
    }
    EXPECT_LE(diff / scale, 1e-8) << to_string(method);
  }
}

TEST(PlateProfile, DomainChecks) {
  EXPECT_THROW(plate::radial_profile(0.0, 0.5), DomainError);
  EXPECT_THROW(plate::radial_profile(1e-2, 1.6), DomainError);
  EXPECT_THROW(plate::make_plate(1.0, 0.5), DomainError);
}

TEST(PlateField, EdgeResultantsVanishOnParameterGrid) {
  for (double xi : logspace(1e-4, 1e-1, 5))
    for (double chi : logspace(1e-3, 1.4, 5)) {
      const auto sol = plate::make_plate(xi, chi);
      double smax = 0.0;
      for (int i = 0; i <= 200; ++i) smax = std::max(smax, std::abs(plate::field(sol, 1.0, -1.0 + 0.01 * i).s_rr));
      const double Nrr = oracle::simpson([&](double Z) { return plate::field(sol, 1.0, Z).s_rr; }, -1.0, 1.0, 400);
      const double Nrz = oracle::simpson([&](double Z) { return plate::field(sol, 1.0, Z).s_rz; }, -1.0, 1.0, 400);
      EXPECT_LE(std::abs(Nrr), 1e-8 * smax) << "xi=" << xi << " chi=" << chi;
      EXPECT_LE(std::abs(Nrz), 1e-8 * smax) << "xi=" << xi << " chi=" << chi;
    }
}

TEST(PlateField, DirichletDataOnPlates) {
  for (double xi : logspace(1e-4, 1e-1, 5))
    for (double chi : {0.0, 1e-3, 0.1, 1.0, 1.4}) {
      const double U = 0.7;
      const auto sol = plate::make_plate(xi, chi, 1.0, U);
      for (int i = 0; i <= 50; ++i) {
        const double R = 0.02 * i;
        for (double Z : {-1.0, 1.0}) {
          const auto f = plate::field(sol, R, Z);
          EXPECT_NEAR(f.u_z, Z * U, 1e-12 * U);
          EXPECT_NEAR(f.u_r, 0.0, 1e-12 * U);
        }
      }
    }
}

TEST(PlateField, IncompressibleBranchValues) {
  const auto sol = plate::make_plate(0.1, 0.0);
  EXPECT_TRUE(sol.incompressible);
  EXPECT_NEAR(plate::field(sol, 1.0, 0.0).u_r, -7.5, 1e-14);
}

TEST(PlateField, IncompressibleBranchIsStefanFlow) {
  const double a = 2.0, xi = 0.05, h = a * xi, U = 0.3;
  const auto sol = plate::make_plate(xi, 0.0, a, U);
  for (double R : {0.0, 0.3, 0.9})
    for (double Z : {-1.0, -0.4, 0.0, 0.6, 1.0}) {
      const auto f = plate::field(sol, R, Z);
      const auto v = plate::stefan_fluid_fields(a * R, h * Z, a, h, 1.0, -U);
      EXPECT_NEAR(f.u_r, v.v_r, 1e-12 * std::max(1.0, std::abs(v.v_r)));
      EXPECT_NEAR(f.u_z, v.v_z, 1e-12);
    }
}

TEST(StefanFlow, ElementaryValues) {
  const double a = 1.5, h = 0.1, mu = 2.0, V = 0.4;
  EXPECT_EQ(plate::stefan_fluid_fields(0.0, 0.03, a, h, mu, V).v_r, 0.0);
  EXPECT_NEAR(plate::stefan_fluid_fields(0.7, h, a, h, mu, V).v_z, -V, 1e-15);
  EXPECT_NEAR(plate::stefan_fluid_fields(0.0, 0.0, a, h, mu, V).p, mu * V * (3 * a * a + 2 * h * h) / (4 * h * h * h), 1e-10);
}

TEST(PlateField, CompressibleLimitIsUniaxialStraining) {
  const auto sol = plate::make_plate(1e-6, 1.0);
  const auto f = plate::field(sol, 0.5, 0.5);
  EXPECT_LE(std::abs(f.u_r), 1e-4);
  EXPECT_NEAR(f.u_z, 0.5, 1e-4);
}

TEST(PlateField, StressesFollowHookesLawOfDisplacements) {
  const double a = 1.3, U = 0.8, mu = 2.0;
  for (auto [xi, chi] : std::vector<std::pair<double, double>>{{0.05, 0.8}, {0.1, 0.3}, {0.02, 1.2}}) {
    const auto sol = plate::make_plate(xi, chi, a, U, mu);
    const double lambda = sol.mat.lambda, h = a * xi;
    auto u = [&](double r, double z) {
      const auto f = plate::field(sol, r / a, z / h);
      return std::pair{f.u_r, f.u_z};
    };
    for (double R : {0.3, 0.6})
      for (double Z : {-0.5, 0.2}) {
        const double r = a * R, z = h * Z, dr = 1e-4 * a, dz = 1e-4 * h;
        const auto c = u(r, z);
        const double ur_r = (u(r + dr, z).first - u(r - dr, z).first) / (2 * dr);
        const double ur_z = (u(r, z + dz).first - u(r, z - dz).first) / (2 * dz);
        const double uz_r = (u(r + dr, z).second - u(r - dr, z).second) / (2 * dr);
        const double uz_z = (u(r, z + dz).second - u(r, z - dz).second) / (2 * dz);
        const double div = ur_r + c.first / r + uz_z;
        const auto f = plate::field(sol, R, Z);
        const double scale = std::max({std::abs(f.s_rr), std::abs(f.s_zz), std::abs(f.s_tt), std::abs(f.s_rz)});
        EXPECT_NEAR(f.s_rr, lambda * div + 2 * mu * ur_r, 1e-6 * scale);
        EXPECT_NEAR(f.s_tt, lambda * div + 2 * mu * c.first / r, 1e-6 * scale);
        EXPECT_NEAR(f.s_zz, lambda * div + 2 * mu * uz_z, 1e-6 * scale);
        EXPECT_NEAR(f.s_rz, mu * (ur_z + uz_r), 1e-6 * scale);
      }
  }
}

TEST(PlateForce, IncompressibleClassicalValue) {
  const auto sol = plate::make_plate(0.1, 0.0);
  EXPECT_NEAR(plate::force(sol), 1178.10, 0.01);
  EXPECT_NEAR(plate::force(sol), 3.0 * std::numbers::pi / (8.0 * 1e-3), 1e-9);
  EXPECT_EQ(plate::force_factor(0.1, 0.0), 1.0);
  for (double xi : {1e-1, 1e-2, 1e-3}) EXPECT_NEAR(plate::force_factor(xi, 1e-9), 1.0, 1e-6);
}

TEST(PlateForce, CompressibleLimit) {
  const double xi = 1e-6, chi = 1.0;
  const double F = plate::force(plate::make_plate(xi, chi));
  EXPECT_NEAR(F / (3.0 * std::numbers::pi / (xi * chi * chi)), 1.0, 1e-3);
}

TEST(PlateForce, FieldIntegralReproducesForceFormula) {
  const double a = 1.7, U = 0.4, mu = 3.0;
  for (double xi : {1e-1, 1e-2, 1e-3})
    for (double chi : {0.0, 1e-3, 0.1, 1.0}) {
      const auto sol = plate::make_plate(xi, chi, a, U, mu);
      QuadratureOptions qo;
      qo.rel_tol = 1e-12;
      const auto q = integrate([&](double R) { return plate::field(sol, R, 1.0).s_zz * R; }, 0.0, 1.0, qo);
      const double F = 2.0 * std::numbers::pi * a * a * q.value;
      EXPECT_NEAR(F / plate::force(sol), 1.0, 1e-10) << "xi=" << xi << " chi=" << chi;
    }
}

TEST(ApparentModulus, ElementaryValues) {
  EXPECT_NEAR(plate::apparent_modulus(0.1, 0.3).E_hat_i, 12.5, 1e-13);
  EXPECT_NEAR(plate::apparent_modulus(0.1, 1.0).E_hat_c, 1.2, 1e-14);
  EXPECT_TRUE(std::isinf(plate::apparent_modulus(0.1, 0.0).E_hat_c));
  EXPECT_TRUE(plate::apparent_modulus(0.1, 1.5).singular);
}

TEST(ApparentModulus, CompressedModulusEqualsConstrainedRatioAtQuarterPoisson) {
  // (lambda + 2mu)/E at nu = 1/4
  const auto m = MaterialParams::from_nu(0.25);
  EXPECT_NEAR(plate::apparent_modulus(0.1, chi_from_nu(0.25)).E_hat_c, (m.lambda + 2 * m.mu) / m.youngs, 1e-14);
}

TEST(ApparentModulus, LimitConsistency) {
  for (double xi : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const auto m = plate::apparent_modulus(xi, 1e-8);
    EXPECT_LE(std::abs(m.E_hat / m.E_hat_i - 1.0), 1e-4) << "xi=" << xi;
    EXPECT_NEAR(m.E_hat, plate::apparent_modulus(xi, 0.0).E_hat, 1e-6 * m.E_hat);
  }
  for (double chi : {0.5, 1.0}) {
    const auto m = plate::apparent_modulus(chi * 1e-6, chi);
    EXPECT_LE(std::abs(m.E_hat / m.E_hat_c - 1.0), 1e-3) << "chi=" << chi;
  }
}

TEST(ApparentModulus, ModulusIsForceOverAreaStrain) {
  // E_hat = F h / (pi a^2 U E)
  for (double xi : {1e-1, 1e-2})
    for (double chi : {0.1, 0.9}) {
      const auto sol = plate::make_plate(xi, chi);
      const double E = sol.mat.youngs;
      const double from_force = plate::force(sol) * xi / (std::numbers::pi * E);
      EXPECT_NEAR(plate::apparent_modulus(xi, chi).E_hat / from_force, 1.0, 1e-10);
    }
}

TEST(ApparentModulus, LindseyDifferenceMagnitude) {
  for (double xi : {1e-3, 1e-4})
    for (double chi : {0.5, 1.0}) {
      const auto m = plate::apparent_modulus(xi, chi);
      const double measured = (m.E_hat_L - m.E_hat) / m.E_hat;
      const double est = plate::lindsey_difference_estimate(xi, chi);
      EXPECT_NEAR(std::abs(measured), std::abs(est), 0.01 * std::abs(est));
      // The two printed moduli put E_L above E; the leading-order estimate carries the opposite sign.
      EXPECT_GT(measured, 0.0);
      EXPECT_LT(est, 0.0);
    }
  EXPECT_NEAR(plate::lindsey_difference_estimate(1e-3, 1.0), -7.78e-4, 1e-6);
}

TEST(CompressibleSuperposition, StressStateProperties) {
  const auto s1 = plate::compressible_superposition(1e-2, 1.0, 1.0, 1.0, 1.0);
  EXPECT_EQ(s1.s_rz, 0.0);
  EXPECT_NEAR(s1.s_zz / s1.s_rr, 3.0, 1e-14);
  EXPECT_EQ(s1.edge_load, -s1.s_rr);
  const auto s2 = plate::compressible_superposition(1e-2, std::sqrt(1.5), 1.0, 1.0, 1.0);
  EXPECT_NEAR(s2.s_rr, 0.0, 1e-12 * s2.s_zz);
  EXPECT_THROW(plate::compressible_superposition(1e-2, 0.0, 1.0, 1.0, 1.0), DomainError);
}

}  // namespace
