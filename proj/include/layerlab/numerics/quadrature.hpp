#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <tuple>
#include <vector>

#include "layerlab/errors.hpp"

namespace layerlab {

struct QuadratureResult {
  double value = 0.0;
  double abs_err_est = 0.0;
  std::size_t evals = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  std::size_t max_subdivisions = 20000;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Panel gk15(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return Panel{lo, hi, k * hw, std::abs((k - g) * hw)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature. `breaks` optionally seeds the
// initial partition (must be sorted and contain lo and hi).
template <class F>
QuadratureResult integrate(F&& f, const std::vector<double>& breaks,
                           const QuadratureOptions& opt = {}) {
  std::priority_queue<detail::Panel> heap;
  QuadratureResult r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] == breaks[i]) continue;
    heap.push(detail::gk15(f, breaks[i], breaks[i + 1]));
    r.evals += 15;
  }
  auto totals = [&heap] {
    auto copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().err;
      copy.pop();
    }
    return std::pair{v, e};
  };
  double value = 0.0, err = 0.0;
  std::tie(value, err) = totals();
  std::size_t splits = 0;
  while (err > std::max(opt.rel_tol * std::abs(value), opt.abs_tol)) {
    if (splits >= opt.max_subdivisions) {
      throw NumericalError(NumericalError::Kind::max_subdivisions,
                           "integrate: max subdivisions reached (best estimate carried)", value);
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push(worst);
      break;  // interval no longer divisible in double precision
    }
    const auto left = detail::gk15(f, worst.lo, mid);
    const auto right = detail::gk15(f, mid, worst.hi);
    r.evals += 30;
    value += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (splits % 64 == 0) std::tie(value, err) = totals();  // curb drift in running sums
  }
  std::tie(value, err) = totals();
  r.value = value;
  r.abs_err_est = err;
  return r;
}

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opt = {}) {
  if (lo == hi) return QuadratureResult{0.0, 0.0, 15};
  if (hi < lo) {
    auto r = integrate(f, std::vector<double>{hi, lo}, opt);
    r.value = -r.value;
    return r;
  }
  return integrate(f, std::vector<double>{lo, hi}, opt);
}

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, double tol) {
  QuadratureOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-3;
  return integrate(f, lo, hi, opt);
}

}  // namespace layerlab
