#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace layerlab {

struct RadialDerivs {
  double A = 0.0, dA = 0.0, d2A = 0.0, d3A = 0.0;
};

// A'' + p A' + q A = f, with analytic derivatives of the coefficients so that
// A''' can be recovered from the differentiated equation.
struct LinearOde {
  std::function<double(double)> p, q, f;
  std::function<double(double)> dp, dq, df;
  double singular_c = 0.0;  // p ~ c/R as R -> 0 (only used with a regular left end)
};

namespace detail {

// Septic Hermite interpolation on one interval from (y, y', y'', y''') at both ends.
class SepticHermite {
 public:
  static const SepticHermite& instance() {
    static const SepticHermite h;
    return h;
  }
  // Returns value and first two derivatives at fraction t of an interval of width h.
  std::array<double, 3> eval(const std::array<double, 4>& y0, const std::array<double, 4>& y1,
                             double h, double t) const {
    std::array<double, 8> c{};
    const double inv_fact[4] = {1.0, 1.0, 0.5, 1.0 / 6.0};
    double hp = 1.0;
    std::array<double, 4> hpow{};
    for (int k = 0; k < 4; ++k) {
      hpow[k] = hp;
      c[k] = y0[k] * hp * inv_fact[k];
      hp *= h;
    }
    Eigen::Vector4d rhs;
    for (int j = 0; j < 4; ++j) {
      double s = y1[j] * hpow[j];
      for (int k = j; k < 4; ++k) s -= falling(k, j) * c[k];
      rhs[j] = s;
    }
    const Eigen::Vector4d hi = inv_ * rhs;
    for (int k = 0; k < 4; ++k) c[4 + k] = hi[k];
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (int k = 7; k >= 0; --k) v = v * t + c[k];
    for (int k = 7; k >= 1; --k) d1 = d1 * t + k * c[k];
    for (int k = 7; k >= 2; --k) d2 = d2 * t + k * (k - 1) * c[k];
    return {v, d1 / h, d2 / (h * h)};
  }

 private:
  SepticHermite() {
    Eigen::Matrix4d m;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m(j, k) = falling(4 + k, j);
    inv_ = m.inverse();
  }
  static double falling(int k, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (k - i);
    return r;
  }
  Eigen::Matrix4d inv_;
};

struct MeshStore {
  LinearOde ode;
  std::vector<double> R;
  std::vector<std::array<double, 4>> y;  // A, A', A'', A''' at nodes
  bool series_start = false;             // [0, R.front()] covered by A0 + A2 R^2
  double A0 = 0.0, A2 = 0.0;

  std::array<double, 4> node_derivs(double r, double A, double dA) const {
    const double p = ode.p(r), q = ode.q(r), f = ode.f(r);
    const double d2 = f - p * dA - q * A;
    const double d3 = ode.df(r) - ode.dp(r) * dA - p * d2 - ode.dq(r) * A - q * dA;
    return {A, dA, d2, d3};
  }

  std::size_t locate(double r) const {
    auto it = std::upper_bound(R.begin(), R.end(), r);
    std::size_t i = (it == R.begin()) ? 0 : std::size_t(it - R.begin()) - 1;
    return std::min(i, R.size() - 2);
  }

  // Interpolated (A, A', A'') with A'' differentiated from the interpolant.
  std::array<double, 3> interp(double r) const {
    const std::size_t i = locate(r);
    const double h = R[i + 1] - R[i];
    return SepticHermite::instance().eval(y[i], y[i + 1], h, (r - R[i]) / h);
  }

  RadialDerivs eval(double r) const {
    if (series_start && r < R.front()) {
      return RadialDerivs{A0 + A2 * r * r, 2.0 * A2 * r, 2.0 * A2, 0.0};
    }
    const auto v = interp(r);
    const auto d = node_derivs(r, v[0], v[1]);
    return RadialDerivs{d[0], d[1], d[2], d[3]};
  }

  // Relative residual of the interpolant. The part attributable to rounding in the node
  // values (amplified by 1/h^2 in the interpolant's second derivative) is discounted.
  double residual(double r) const {
    const std::size_t i = locate(r);
    const double h = R[i + 1] - R[i];
    const auto v = SepticHermite::instance().eval(y[i], y[i + 1], h, (r - R[i]) / h);
    const double p = ode.p(r), q = ode.q(r), f = ode.f(r);
    const double res = v[2] + p * v[1] + q * v[0] - f;
    const double scale =
        std::max({std::abs(f), std::abs(q * v[0]), std::abs(p * v[1]), std::abs(v[2])});
    const double ulp = std::numeric_limits<double>::epsilon();
    const double noise = 2e3 * ulp * (std::max(std::abs(y[i][0]), std::abs(y[i + 1][0])) / (h * h) +
                                      std::max(std::abs(y[i][1]), std::abs(y[i + 1][1])) / h);
    const double excess = std::max(0.0, std::abs(res) - noise);
    return scale > 0.0 ? excess / scale : excess;
  }
};

}  // namespace detail

// A(R) and its first three derivatives, either closed form or backed by a solver mesh.
class RadialSolution {
 public:
  struct Meta {
    std::string method;
    double tol_achieved = 0.0;
    std::size_t mesh_size = 0;
  };

  RadialSolution() = default;

  static RadialSolution closed_form(double lo, double hi, std::function<RadialDerivs(double)> fn,
                                    std::string method = "closed-form") {
    RadialSolution s;
    s.r_lo_ = lo;
    s.r_hi_ = hi;
    s.closed_ = std::move(fn);
    s.meta_.method = std::move(method);
    return s;
  }

  static RadialSolution from_mesh(std::shared_ptr<const detail::MeshStore> store, Meta meta) {
    RadialSolution s;
    s.mesh_ = std::move(store);
    s.r_lo_ = s.mesh_->series_start ? 0.0 : s.mesh_->R.front();
    s.r_hi_ = s.mesh_->R.back();
    meta.mesh_size = s.mesh_->R.size();
    s.meta_ = std::move(meta);
    return s;
  }

  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_hi_; }
  const Meta& meta() const { return meta_; }
  bool has_mesh() const { return static_cast<bool>(mesh_); }

  RadialDerivs eval(double R) const {
    R = std::clamp(R, r_lo_, r_hi_);
    return closed_ ? closed_(R) : mesh_->eval(R);
  }
  RadialDerivs operator()(double R) const { return eval(R); }

  // Node abscissae (empty for closed forms).
  std::vector<double> mesh() const { return mesh_ ? mesh_->R : std::vector<double>{}; }

  // Relative ODE residual of the dense interpolant (second derivative taken from the
  // interpolant itself, not from the equation).
  double interpolant_residual(double R) const { return mesh_ ? mesh_->residual(R) : 0.0; }

 private:
  double r_lo_ = 0.0, r_hi_ = 0.0;
  std::function<RadialDerivs(double)> closed_;
  std::shared_ptr<const detail::MeshStore> mesh_;
  Meta meta_;
};

}  // namespace layerlab
