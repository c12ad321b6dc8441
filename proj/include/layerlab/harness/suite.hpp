#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "layerlab/harness/table4.hpp"
#include "layerlab/material.hpp"
#include "layerlab/navier_series.hpp"
#include "layerlab/plate.hpp"
#include "layerlab/regime.hpp"
#include "layerlab/sphere.hpp"

namespace layerlab::harness {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline double round_to(double v, int decimals) {
  const double s = std::pow(10.0, decimals);
  return std::round(v * s) / s;
}

inline CheckResult check_table4(const GoldenTable& golden) {
  const auto art = verify_table4(golden);
  std::ostringstream d;
  d << art.gating_matches() << "/" << art.gating_total() << " printed Psi cells reproduced to printed digits";
  return {"table4", art.pass, d.str()};
}

inline CheckResult check_transitions() {
  const auto t = regime::plate_transitions(0.10);
  const auto n2 = regime::plate_nu_interval(1e-2, t), n3 = regime::plate_nu_interval(1e-3, t);
  const bool ok = std::abs(t.zeta_c - 0.046) <= 1e-3 && std::abs(t.zeta_i - 1.3) <= 0.05 &&
                  round_to(n2.nu_lo, 2) == 0.49 && round_to(n2.nu_hi, 5) == 0.49999 &&
                  round_to(n3.nu_lo, 4) == 0.4999 && round_to(n3.nu_hi, 7) == 0.4999999;
  std::ostringstream d;
  d.precision(10);
  d << "zeta_c=" << t.zeta_c << " zeta_i=" << t.zeta_i << " nu(1e-2)=(" << n2.nu_lo << ", " << n2.nu_hi
    << ") nu(1e-3)=(" << n3.nu_lo << ", " << n3.nu_hi << ")";
  return {"transitions", ok, d.str()};
}

inline CheckResult check_material() {
  const double chi = chi_from_nu(0.499905);
  std::ostringstream d;
  d.precision(10);
  d << "chi(0.499905)=" << chi;
  return {"material", round_to(chi, 7) == 0.0238724, d.str()};
}

inline CheckResult check_theta_identity() {
  double worst = 0.0;
  for (double xi : {1e-2, 1e-3}) {
    const auto th = navier::solve_theta(xi, 1.0);
    const auto sp = sphere::solve_sphere(xi, std::sqrt(3.0 * xi));
    double diff = 0.0, scale = 0.0;
    for (const auto& m : {th.Theta.mesh(), sp.A.mesh()})
      for (double R : m) {
        diff = std::max(diff, std::abs(th.Theta(R).A - 6.0 * sp.A(R).A));
        scale = std::max(scale, std::abs(th.Theta(R).A));
      }
    worst = std::max(worst, diff / scale);
  }
  std::ostringstream d;
  d << "sup |Theta - 6 A U| / sup |Theta| = " << worst;
  return {"theta-identity", worst <= 1e-6, d.str()};
}

inline CheckResult check_lindsey() {
  bool ok = true;
  std::ostringstream d;
  for (double xi : {1e-3, 1e-4})
    for (double chi : {0.5, 1.0}) {
      const auto m = plate::apparent_modulus(xi, chi);
      const double measured = (m.E_hat_L - m.E_hat) / m.E_hat;
      const double est = plate::lindsey_difference_estimate(xi, chi);
      const bool pass = std::abs(measured - est) <= 0.1 * std::abs(est);
      ok = ok && pass;
      d << "(" << xi << "," << chi << "): " << measured << " vs " << est << "; ";
    }
  return {"lindsey", ok, d.str()};
}

inline CheckResult check_limits() {
  bool ok = true;
  std::ostringstream d;
  for (double xi : {1e-4, 1e-3, 1e-2}) {
    const auto m = plate::apparent_modulus(xi, 1e-8);
    const double pe = m.E_hat / m.E_hat_i - 1.0;
    const auto sol = sphere::solve_sphere(xi, 1e-6);
    const double ps = sphere::sphere_force(sol).Psi / sphere::psi_extremes(xi, 1e-6).Psi_i;
    ok = ok && std::abs(pe) <= 1e-4 && ps >= 0.995 && ps <= 1.005;
    d << "xi=" << xi << ": E/E^i-1=" << pe << " Psi/Psi^i=" << ps << "; ";
  }
  return {"limits", ok, d.str()};
}

inline CheckResult check_dual_integrators() {
  double worst = 0.0;
  const auto cells = parallel_map<Table4Cell>(16, [](std::size_t i) {
    return compute_table4_cell(table4_xi()[i / 4], table4_chi()[i % 4]);
  });
  for (const auto& c : cells) worst = std::max(worst, c.dual_agreement);
  std::ostringstream d;
  d << "worst collocation/sweep sup-norm relative difference = " << worst;
  return {"dual-integrators", worst <= 1e-8, d.str()};
}

inline std::vector<CheckResult> run_suite(const GoldenTable& golden) {
  return {check_table4(golden), check_transitions(), check_material(), check_theta_identity(),
          check_lindsey(),      check_limits(),      check_dual_integrators()};
}

}  // namespace layerlab::harness
