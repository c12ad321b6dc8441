#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerlab/harness/format.hpp"
#include "layerlab/harness/parallel.hpp"
#include "layerlab/harness/run_spec.hpp"
#include "layerlab/numerics/bvp.hpp"
#include "layerlab/sphere.hpp"

#ifndef LAYERLAB_DATA_DIR
#define LAYERLAB_DATA_DIR "data"
#endif

namespace layerlab::harness {

// A value printed as mantissa x 10^exponent, e.g. "0.25e5"; its resolution is one unit in
// the last printed mantissa digit.
struct PrintedValue {
  std::string text;
  double value = 0.0;
  double half_unit = 0.0;

  static PrintedValue parse(const std::string& s) {
    const auto e = s.find_first_of("eE");
    const std::string mant = s.substr(0, e);
    const int exponent = e == std::string::npos ? 0 : std::stoi(s.substr(e + 1));
    const auto dot = mant.find('.');
    const int decimals = dot == std::string::npos ? 0 : int(mant.size() - dot - 1);
    PrintedValue p;
    p.text = s;
    p.value = std::stod(s);
    p.half_unit = 0.5 * std::pow(10.0, exponent - decimals);
    return p;
  }

  // True when `v` rounds to the printed digits.
  bool matches(double v) const { return std::abs(v - value) <= half_unit * (1.0 + 1e-12); }
};

struct GoldenCell {
  std::string quantity;  // psi, psi_fe, psi_i, psi_c
  double xi = 0.0, chi = 0.0;
  PrintedValue printed;
  std::string citation;
};

struct GoldenTable {
  int version = 0;
  std::vector<GoldenCell> cells;

  const GoldenCell* find(const std::string& quantity, double xi, double chi) const {
    for (const auto& c : cells)
      if (c.quantity == quantity && std::abs(c.xi - xi) <= 1e-12 * xi && std::abs(c.chi - chi) <= 1e-12 * chi)
        return &c;
    return nullptr;
  }
};

inline std::string default_golden_path() { return std::string(LAYERLAB_DATA_DIR) + "/table4_golden.json"; }

inline GoldenTable load_golden(const std::string& path = default_golden_path()) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open golden data '" + path + "'");
  const auto doc = nlohmann::json::parse(f);
  GoldenTable t;
  t.version = doc.at("version").get<int>();
  for (const auto& c : doc.at("cells")) {
    GoldenCell g;
    g.quantity = c.at("quantity").get<std::string>();
    g.xi = c.at("xi").get<double>();
    g.chi = c.at("chi").get<double>();
    g.printed = PrintedValue::parse(c.at("printed").get<std::string>());
    g.citation = c.at("citation").get<std::string>();
    if (g.citation.empty()) throw std::runtime_error("golden cell without citation");
    t.cells.push_back(std::move(g));
  }
  return t;
}

// xi outer (descending), chi inner (ascending).
inline const std::vector<double>& table4_xi() {
  static const std::vector<double> v = {1e-2, 1e-3, 1e-4, 1e-5};
  return v;
}
inline const std::vector<double>& table4_chi() {
  static const std::vector<double> v = {1e-3, 1e-2, 1e-1, 1.0};
  return v;
}

struct Table4Cell {
  double xi = 0.0, chi = 0.0;
  double psi = 0.0, psi_i = 0.0, psi_c = 0.0;
  double psi_quad_err = 0.0;
  double bvp_residual = 0.0;
  double dual_agreement = 0.0;  // sup |A_colloc - A_sweep| / sup |A_colloc| over mesh nodes
};

inline double dual_method_agreement(const RadialSolution& a, const RadialSolution& b) {
  double diff = 0.0, scale = 0.0;
  auto probe = [&](double R) {
    const double va = a(R).A;
    diff = std::max(diff, std::abs(va - b(R).A));
    scale = std::max(scale, std::abs(va));
  };
  for (double R : a.mesh()) probe(R);
  for (double R : b.mesh()) probe(R);
  return scale > 0.0 ? diff / scale : diff;
}

inline Table4Cell compute_table4_cell(double xi, double chi, bool dual = true) {
  Table4Cell c;
  c.xi = xi;
  c.chi = chi;
  BvpOptions opt;
  const auto sol = sphere::solve_sphere(xi, chi, opt);
  const auto f = sphere::sphere_force(sol);
  c.psi = f.Psi;
  c.psi_quad_err = f.abs_err_est;
  c.bvp_residual = sol.A.meta().tol_achieved;
  const auto ex = sphere::psi_extremes(xi, chi);
  c.psi_i = ex.Psi_i;
  c.psi_c = ex.Psi_c;
  if (dual) {
    opt.method = BvpMethod::imbedding;
    const auto other = sphere::solve_sphere(xi, chi, opt);
    c.dual_agreement = dual_method_agreement(sol.A, other.A);
  }
  return c;
}

struct TableRow {
  double xi = 0.0, chi = 0.0;
  std::string quantity;
  double value = 0.0;
  std::string source;  // "computed" or "golden"
};

struct CellComparison {
  double xi = 0.0, chi = 0.0;
  std::string quantity;
  double computed = 0.0;
  std::string printed;
  bool match = false;
  bool gating = false;  // only the printed Psi row decides pass/fail
  std::string citation;
};

struct TableArtifact {
  std::vector<Table4Cell> cells;
  std::vector<TableRow> rows;
  std::vector<CellComparison> comparisons;
  bool pass = false;

  std::size_t gating_matches() const {
    std::size_t n = 0;
    for (const auto& c : comparisons) n += (c.gating && c.match);
    return n;
  }
  std::size_t gating_total() const {
    std::size_t n = 0;
    for (const auto& c : comparisons) n += c.gating;
    return n;
  }
};

inline TableArtifact verify_table4(const GoldenTable& golden, int threads = sweep_threads()) {
  std::vector<std::pair<double, double>> grid;
  for (double xi : table4_xi())
    for (double chi : table4_chi()) grid.emplace_back(xi, chi);
  TableArtifact art;
  art.cells = parallel_map<Table4Cell>(
      grid.size(), [&](std::size_t i) { return compute_table4_cell(grid[i].first, grid[i].second); }, threads);
  art.pass = true;
  for (const auto& c : art.cells) {
    art.rows.push_back({c.xi, c.chi, "psi", c.psi, "computed"});
    art.rows.push_back({c.xi, c.chi, "psi_i", c.psi_i, "computed"});
    art.rows.push_back({c.xi, c.chi, "psi_c", c.psi_c, "computed"});
    for (const char* q : {"psi", "psi_fe", "psi_i", "psi_c"}) {
      const GoldenCell* g = golden.find(q, c.xi, c.chi);
      if (!g) throw std::runtime_error(std::string("golden data lacks cell ") + q);
      art.rows.push_back({c.xi, c.chi, std::string(q) + "_golden", g->printed.value, "golden"});
      const double computed = std::string(q) == "psi_i" ? c.psi_i : std::string(q) == "psi_c" ? c.psi_c : c.psi;
      CellComparison cmp{c.xi, c.chi, q, computed, g->printed.text, g->printed.matches(computed),
                         std::string(q) == "psi", g->citation};
      if (cmp.gating && !cmp.match) art.pass = false;
      art.comparisons.push_back(std::move(cmp));
    }
  }
  return art;
}

inline void write_table_csv(const TableArtifact& art, std::ostream& os) {
  os << "xi,chi,quantity,value,source\n";
  for (const auto& r : art.rows)
    os << format_double(r.xi) << ',' << format_double(r.chi) << ',' << r.quantity << ',' << format_double(r.value)
       << ',' << r.source << '\n';
}

inline void write_comparison_report(const TableArtifact& art, std::ostream& os) {
  for (const auto& c : art.comparisons) {
    std::ostringstream line;
    line << (c.match ? "match   " : "MISMATCH") << (c.gating ? " [gating] " : " [info]   ") << c.quantity
         << " xi=" << c.xi << " chi=" << c.chi << " computed=" << c.computed << " printed=" << c.printed;
    os << line.str() << '\n';
  }
  os << "gating cells matched: " << art.gating_matches() << "/" << art.gating_total() << '\n';
}

}  // namespace layerlab::harness
