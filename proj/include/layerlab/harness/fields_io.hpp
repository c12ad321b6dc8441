#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/fields.hpp"
#include "layerlab/harness/format.hpp"

namespace layerlab::harness {

// Tensor grid of sample points. With `z_relative`, Z values are fractions of the local
// half-gap (needed for the sphere layer, whose thickness varies with R).
struct FieldGrid {
  std::vector<double> R, Z;
  bool z_relative = false;

  static std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("FieldGrid: need at least one point per axis");
    std::vector<double> v(std::size_t(n), lo);
    for (int i = 1; i < n; ++i) v[std::size_t(i)] = lo + (hi - lo) * i / (n - 1);
    if (n > 1) v.back() = hi;
    return v;
  }
  static FieldGrid uniform(double R_lo, double R_hi, int nR, double Z_lo, double Z_hi, int nZ,
                           bool z_relative = false) {
    return FieldGrid{linspace(R_lo, R_hi, nR), linspace(Z_lo, Z_hi, nZ), z_relative};
  }
};

inline constexpr const char* kFieldHeader = "R,Z,u_r,u_z,s_rr,s_tt,s_zz,s_rz";

// Rows ordered R-major with Z varying fastest. `gap(R)` maps relative Z to absolute Z.
template <class Eval, class Gap>
void emit_fields(Eval&& eval, Gap&& gap, const FieldGrid& grid, std::ostream& os) {
  os << kFieldHeader << '\n';
  for (double R : grid.R) {
    const double g = grid.z_relative ? gap(R) : 1.0;
    for (double z : grid.Z) {
      const FieldSample s = eval(R, z * g);
      os << format_double(s.R) << ',' << format_double(s.Z) << ',' << format_double(s.u_r) << ','
         << format_double(s.u_z) << ',' << format_double(s.s_rr) << ',' << format_double(s.s_tt) << ','
         << format_double(s.s_zz) << ',' << format_double(s.s_rz) << '\n';
    }
  }
}

template <class Eval>
void emit_fields(Eval&& eval, const FieldGrid& grid, std::ostream& os) {
  emit_fields(eval, [](double) { return 1.0; }, grid, os);
}

template <class Eval, class Gap>
void emit_fields(Eval&& eval, Gap&& gap, const FieldGrid& grid, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot open '" + path + "' for writing");
  emit_fields(eval, gap, grid, f);
  f.flush();
  if (!f) throw std::system_error(errno, std::generic_category(), "write to '" + path + "' failed");
}

}  // namespace layerlab::harness
