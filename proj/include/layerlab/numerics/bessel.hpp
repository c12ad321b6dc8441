#pragma once

#include <cmath>
#include <numbers>

#include "layerlab/errors.hpp"

namespace layerlab {

struct BesselRatioEval {
  double x = 0.0;
  double t = 0.0;          // I1(x)/I0(x)
  double scaled_i0 = 1.0;  // e^-x I0(x)
  double scaled_i1 = 0.0;  // e^-x I1(x)
};

namespace detail {

inline constexpr double kBesselSeam = 15.0;
inline constexpr double kRatioAsymptotic = 500.0;

// e^-y I_n(y) / y^n for n = 0, 1, 2 (finite at y = 0).
inline double scaled_i_over_pow(int n, double y) {
  if (y < kBesselSeam) {
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    const double q = 0.25 * y * y;
    double term = 1.0 / (std::ldexp(1.0, n) * fact);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= q / (double(k) * double(k + n));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-y) * sum;
  }
  // Hankel expansion, truncated at the smallest term.
  const double mu4 = 4.0 * n * n;
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu4 - odd * odd) / (k * 8.0 * y);
    if (std::abs(term) > prev) break;
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * y) / std::pow(y, n);
}

// I1/I0 by the Gauss continued fraction I1/I0 = 1/(2/x + 1/(4/x + ...)), modified Lentz.
inline double ratio_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = tiny, C = f, D = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double b = 2.0 * j / x;
    D = b + D;
    if (D == 0.0) D = tiny;
    C = b + 1.0 / C;
    if (C == 0.0) C = tiny;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

}  // namespace detail

inline double scaled_bessel_i0(double x) { return detail::scaled_i_over_pow(0, x); }
inline double scaled_bessel_i1(double x) { return x * detail::scaled_i_over_pow(1, x); }

inline BesselRatioEval bessel_ratio(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_ratio: x must be non-negative");
  BesselRatioEval r;
  r.x = x;
  r.scaled_i0 = scaled_bessel_i0(x);
  r.scaled_i1 = scaled_bessel_i1(x);
  if (x == 0.0)
    r.t = 0.0;
  else if (x < detail::kRatioAsymptotic)
    r.t = detail::ratio_continued_fraction(x);
  else
    r.t = r.scaled_i1 / r.scaled_i0;
  return r;
}

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

// h_n(x, R) = [I_n(xR)/(xR)^n] / I_0(x), the combination every plate formula needs.
// Bounded for all x >= 0 and 0 <= R <= 1.
inline double bessel_h(int n, double x, double R = 1.0) {
  const double y = x * R;
  const double num = detail::scaled_i_over_pow(n, y);
  const double den = detail::scaled_i_over_pow(0, x);
  return std::exp(y - x) * num / den;
}

}  // namespace layerlab
