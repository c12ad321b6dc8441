#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace layerlab::harness {

// Locale-independent, 17 significant digits (printf "%.17g" semantics).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0" in output tables
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

}  // namespace layerlab::harness
