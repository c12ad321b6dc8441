#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "layerlab/harness/fields_io.hpp"
#include "layerlab/harness/format.hpp"
#include "layerlab/harness/parallel.hpp"
#include "layerlab/harness/run_spec.hpp"
#include "layerlab/harness/suite.hpp"
#include "layerlab/harness/table4.hpp"
#include "layerlab/layerlab.hpp"

namespace {

using namespace layerlab;
using namespace layerlab::harness;
using Record = nlohmann::ordered_json;

struct Flags {
  std::optional<double> nu, chi, xi;
  double a = 1.0, U = 1.0, mu = 1.0, tolerance = 0.1;
  std::string xi_range, chi_range, geometry = "plate", output;
  bool json = false, csv = false, timestamp = false;
  int nR = 11, nZ = 5;
};

RunSpec to_spec(Command cmd, const Flags& f) {
  RunSpec s;
  s.command = cmd;
  s.material.nu = f.nu;
  s.material.chi = f.chi;
  s.xi = f.xi;
  s.a = f.a;
  s.U = f.U;
  s.mu = f.mu;
  s.tolerance = f.tolerance;
  if (!f.xi_range.empty()) s.xi_sweep = SweepRange::parse(f.xi_range);
  if (!f.chi_range.empty()) s.chi_sweep = SweepRange::parse(f.chi_range);
  if (f.geometry == "plate")
    s.geometry = Geometry::plate;
  else if (f.geometry == "sphere")
    s.geometry = Geometry::sphere;
  else
    throw ParseError("--geometry must be plate or sphere");
  if (f.json && f.csv) throw ParseError("--json and --csv are mutually exclusive");
  s.format = f.json ? OutputFormat::json : f.csv ? OutputFormat::csv : OutputFormat::human;
  s.output_path = f.output;
  s.timestamp = f.timestamp;
  if (f.nR < 1 || f.nZ < 1) throw ParseError("--nr and --nz must be positive");
  s.nR = f.nR;
  s.nZ = f.nZ;
  if (s.xi && !(*s.xi > 0.0)) throw ParseError("--xi must be positive");
  return s;
}

// Writes to the requested file (binary mode, so bytes do not depend on the platform) or stdout.
template <class Fn>
void with_output(const RunSpec& s, Fn&& fn) {
  if (s.output_path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(s.output_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + s.output_path + "' for writing");
  fn(f);
  if (!f.flush()) throw std::runtime_error("write to '" + s.output_path + "' failed");
}

std::string cell_text(const nlohmann::ordered_json& v) {
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

void emit_records(const RunSpec& s, const std::vector<Record>& recs) {
  with_output(s, [&](std::ostream& os) {
    switch (s.format) {
      case OutputFormat::json: {
        nlohmann::ordered_json doc = recs.size() == 1 ? recs.front() : nlohmann::ordered_json(recs);
        if (s.timestamp && recs.size() == 1) doc["generated_at"] = std::time(nullptr);
        os << doc.dump(2) << '\n';
        break;
      }
      case OutputFormat::csv: {
        if (recs.empty()) break;
        bool first = true;
        for (const auto& [k, v] : recs.front().items()) {
          os << (first ? "" : ",") << k;
          first = false;
        }
        os << '\n';
        for (const auto& r : recs) {
          first = true;
          for (const auto& [k, v] : r.items()) {
            os << (first ? "" : ",") << cell_text(v);
            first = false;
          }
          os << '\n';
        }
        break;
      }
      case OutputFormat::human: {
        for (std::size_t i = 0; i < recs.size(); ++i) {
          if (i) os << '\n';
          for (const auto& [k, v] : recs[i].items()) os << k << " = " << cell_text(v) << '\n';
        }
        break;
      }
    }
  });
}

// JSON cannot hold infinities; they are reported as null.
nlohmann::ordered_json num(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr; }

template <class Fn>
std::vector<Record> sweep(const RunSpec& s, Fn&& fn) {
  std::vector<std::pair<double, double>> grid;
  auto xis = s.xi_values();
  std::sort(xis.begin(), xis.end(), std::greater<>());
  auto chis = s.chi_values();
  std::sort(chis.begin(), chis.end());
  for (double xi : xis)
    for (double chi : chis) grid.emplace_back(xi, chi);
  return parallel_map<Record>(grid.size(), [&](std::size_t i) { return fn(grid[i].first, grid[i].second); });
}

Record plate_force_record(const RunSpec& s, double xi, double chi) {
  const auto sol = plate::make_plate(xi, chi, s.a, s.U, s.mu);
  const auto z = zeta_family(xi, chi);
  Record r;
  r["xi"] = xi;
  r["chi"] = chi;
  r["nu"] = nu_from_chi(chi);
  r["force"] = plate::force(sol);
  r["force_factor"] = plate::force_factor(xi, chi);
  r["zeta"] = num(z.zeta);
  return r;
}

Record plate_modulus_record(double xi, double chi) {
  const auto m = plate::apparent_modulus(xi, chi);
  const auto z = zeta_family(xi, chi);
  Record r;
  r["xi"] = xi;
  r["chi"] = chi;
  r["nu"] = nu_from_chi(chi);
  r["e_hat"] = num(m.E_hat);
  r["e_hat_i"] = num(m.E_hat_i);
  r["e_hat_c"] = num(m.E_hat_c);
  r["e_hat_l"] = num(m.E_hat_L);
  r["lindsey_rel_diff"] = num((m.E_hat_L - m.E_hat) / m.E_hat);
  r["lindsey_rel_diff_estimate"] = plate::lindsey_difference_estimate(xi, chi);
  r["zeta"] = num(z.zeta);
  return r;
}

Record sphere_force_record(const RunSpec& s, double xi, double chi) {
  BvpOptions opt;
  const auto sol = sphere::solve_sphere(xi, chi, opt, s.a, s.U, s.mu);
  const auto f = sphere::sphere_force(sol);
  const auto ex = sphere::psi_extremes(xi, chi);
  const auto z = zeta_family(xi, chi);
  const auto rep = regime::classify(Geometry::sphere, xi, chi, s.tolerance);
  Record r;
  r["xi"] = xi;
  r["chi"] = chi;
  r["nu"] = nu_from_chi(chi);
  r["psi"] = f.Psi;
  r["psi_i"] = ex.Psi_i;
  r["psi_c"] = num(ex.Psi_c);
  r["force"] = f.F;
  r["zeta_bar"] = num(z.zeta_bar);
  r["zeta_tilde"] = num(z.zeta_tilde);
  r["regime"] = regime::to_string(rep.label);
  r["bvp_method"] = sol.A.meta().method;
  r["bvp_residual"] = sol.A.meta().tol_achieved;
  r["mesh_size"] = sol.A.meta().mesh_size;
  return r;
}

Record classify_record(const RunSpec& s, double xi, double chi) {
  const auto rep = regime::classify(s.geometry, xi, chi, s.tolerance);
  Record r;
  r["geometry"] = to_string(s.geometry);
  r["xi"] = xi;
  r["chi"] = chi;
  r["tolerance"] = s.tolerance;
  r["zeta"] = num(rep.zeta_family.zeta);
  r["zeta_bar"] = num(rep.zeta_family.zeta_bar);
  r["zeta_tilde"] = num(rep.zeta_family.zeta_tilde);
  if (s.geometry == Geometry::plate) {
    r["zeta_c"] = rep.zeta_c;
    r["zeta_i"] = rep.zeta_i;
  }
  r["regime"] = regime::to_string(rep.label);
  return r;
}

Record compare_plate_record(double xi, double chi) {
  const auto closed = plate::radial_profile(xi, chi);
  Record r;
  r["xi"] = xi;
  r["chi"] = chi;
  for (auto m : {BvpMethod::collocation, BvpMethod::imbedding}) {
    BvpOptions opt;
    opt.method = m;
    const auto num_sol = plate::radial_profile_numeric(xi, chi, opt);
    r[std::string("sup_rel_diff_") + (m == BvpMethod::collocation ? "collocation" : "sweep")] =
        dual_method_agreement(closed, num_sol);
  }
  const auto mod = plate::apparent_modulus(xi, chi);
  r["e_hat"] = num(mod.E_hat);
  r["e_hat_l"] = num(mod.E_hat_L);
  r["lindsey_rel_diff"] = num((mod.E_hat_L - mod.E_hat) / mod.E_hat);
  r["lindsey_rel_diff_estimate"] = plate::lindsey_difference_estimate(xi, chi);
  return r;
}

int run_fields(const RunSpec& s) {
  const double xi = s.xi_values().front(), chi = s.material.resolve_chi();
  if (s.command == Command::plate_field) {
    const auto sol = plate::make_plate(xi, chi, s.a, s.U, s.mu);
    const auto grid = FieldGrid::uniform(0.0, 1.0, s.nR, -1.0, 1.0, s.nZ);
    with_output(s, [&](std::ostream& os) {
      emit_fields([&](double R, double Z) { return plate::field(sol, R, Z); }, grid, os);
    });
  } else {
    const auto sol = sphere::solve_sphere(xi, chi, BvpOptions{}, s.a, s.U, s.mu);
    const auto grid = FieldGrid::uniform(0.0, sol.geo.r_edge, s.nR, -1.0, 1.0, s.nZ, true);
    with_output(s, [&](std::ostream& os) {
      emit_fields([&](double R, double Z) { return sphere::sphere_field(sol, R, Z); },
                  [&](double R) { return sol.geo.gap(R); }, grid, os);
    });
  }
  return kExitOk;
}

int run_transitions(const RunSpec& s) {
  std::vector<Record> recs;
  if (s.geometry == Geometry::plate) {
    const auto t = regime::plate_transitions(s.tolerance);
    std::vector<double> xis = s.xi || s.xi_sweep ? s.xi_values() : std::vector<double>{1e-2, 1e-3};
    for (double xi : xis) {
      const auto nu = regime::plate_nu_interval(xi, t);
      Record r;
      r["geometry"] = "plate";
      r["tolerance"] = s.tolerance;
      r["zeta_c"] = t.zeta_c;
      r["zeta_i"] = t.zeta_i;
      r["xi"] = xi;
      r["nu_lo"] = nu.nu_lo;
      r["nu_hi"] = nu.nu_hi;
      recs.push_back(r);
    }
  } else {
    Record r;
    r["geometry"] = "sphere";
    r["tolerance"] = s.tolerance;
    r["zeta_bar_i"] = regime::kSphereZetaBarIncompressible;
    r["zeta_tilde_c"] = regime::kSphereZetaTildeCompressible;
    recs.push_back(r);
  }
  emit_records(s, recs);
  return kExitOk;
}

int run_table4(const RunSpec& s) {
  const auto golden = load_golden();
  const auto art = verify_table4(golden);
  if (s.format == OutputFormat::json) {
    std::vector<Record> recs;
    for (const auto& c : art.comparisons) {
      Record r;
      r["xi"] = c.xi;
      r["chi"] = c.chi;
      r["quantity"] = c.quantity;
      r["computed"] = c.computed;
      r["printed"] = c.printed;
      r["match"] = c.match;
      r["gating"] = c.gating;
      r["citation"] = c.citation;
      recs.push_back(r);
    }
    emit_records(s, recs);
  } else {
    with_output(s, [&](std::ostream& os) { write_table_csv(art, os); });
  }
  write_comparison_report(art, std::cerr);
  std::cerr << "verify-table4: " << (art.pass ? "PASS" : "FAIL") << '\n';
  return art.pass ? kExitOk : kExitVerificationFailed;
}

int run_suite_cmd(const RunSpec& s) {
  const auto results = run_suite(load_golden());
  bool all = true;
  with_output(s, [&](std::ostream& os) {
    for (const auto& r : results) {
      all = all && r.pass;
      os << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    }
  });
  return all ? kExitOk : kExitVerificationFailed;
}

int dispatch(const RunSpec& s) {
  switch (s.command) {
    case Command::plate_force:
      emit_records(s, sweep(s, [&](double xi, double chi) { return plate_force_record(s, xi, chi); }));
      return kExitOk;
    case Command::plate_modulus:
      emit_records(s, sweep(s, [](double xi, double chi) { return plate_modulus_record(xi, chi); }));
      return kExitOk;
    case Command::sphere_force:
      emit_records(s, sweep(s, [&](double xi, double chi) { return sphere_force_record(s, xi, chi); }));
      return kExitOk;
    case Command::regime_classify:
      emit_records(s, sweep(s, [&](double xi, double chi) { return classify_record(s, xi, chi); }));
      return kExitOk;
    case Command::compare_plate:
      emit_records(s, sweep(s, [](double xi, double chi) { return compare_plate_record(xi, chi); }));
      return kExitOk;
    case Command::plate_field:
    case Command::sphere_field:
      return run_fields(s);
    case Command::regime_transitions:
      return run_transitions(s);
    case Command::verify_table4:
      return run_table4(s);
    case Command::verify_suite:
      return run_suite_cmd(s);
  }
  return kExitParse;
}

// Flat `key = value` files (or a [subcommand] section) fill options not given on the command line.
void merge_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file " + path);
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && item.parents.front() != sub.get_name()) continue;
    auto* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") throw ParseError("unknown config key '" + item.name + "'");
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layerlab: squeezing of thin bonded elastic layers between plates and spheres"};
  app.require_subcommand(1);
  Flags f;
  Command selected = Command::verify_suite;
  std::string config_path;

  const std::vector<std::pair<Command, std::string>> help = {
      {Command::plate_force, "squeezing force between plates"},
      {Command::plate_modulus, "apparent modulus and its limits"},
      {Command::plate_field, "displacement/stress field CSV for plates"},
      {Command::sphere_force, "dimensionless squeezing force Psi between spheres"},
      {Command::sphere_field, "displacement/stress field CSV for spheres (Z as a fraction of the gap)"},
      {Command::regime_classify, "compressible / intermediate / incompressible label"},
      {Command::regime_transitions, "transition points for a tolerance"},
      {Command::compare_plate, "closed form vs numerical BVP, and the Lindsey/Tsai difference"},
      {Command::verify_table4, "reproduce the printed Psi table and write the CSV artifact"},
      {Command::verify_suite, "run the built-in verification checks"}};
  for (const auto& [cmd, desc] : help) {
    auto* sub = app.add_subcommand(to_string(cmd), desc);
    sub->add_option("--xi", f.xi, "thinness h/a");
    sub->add_option("--nu", f.nu, "Poisson's ratio");
    sub->add_option("--chi", f.chi, "compressibility parameter chi");
    sub->add_option("--a", f.a, "radius a");
    sub->add_option("--U", f.U, "half approach U");
    sub->add_option("--mu", f.mu, "shear modulus");
    sub->add_option("--tolerance", f.tolerance, "regime error tolerance");
    sub->add_option("--geometry", f.geometry, "plate | sphere");
    sub->add_option("--xi-range", f.xi_range, "log sweep lo:hi:n");
    sub->add_option("--chi-range", f.chi_range, "log sweep lo:hi:n");
    sub->add_option("--nr", f.nR, "field grid points in R");
    sub->add_option("--nz", f.nZ, "field grid points in Z");
    sub->add_option("-o,--output", f.output, "output file (default: stdout)");
    sub->add_flag("--json", f.json, "JSON output");
    sub->add_flag("--csv", f.csv, "CSV output");
    sub->add_flag("--timestamp", f.timestamp, "add a generation timestamp to JSON metadata");
    sub->add_option("--config", config_path, "key = value configuration file; explicit flags take precedence");
    sub->callback([&selected, cmd = cmd] { selected = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (!config_path.empty()) merge_config(*app.get_subcommands().front(), config_path);
    return dispatch(to_spec(selected, f));
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (best estimate " << e.best << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
