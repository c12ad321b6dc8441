#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "layerlab/errors.hpp"
#include "layerlab/numerics/radial.hpp"

namespace layerlab {

struct LeftCondition {
  enum class Kind { regular, value };
  Kind kind = Kind::regular;
  double value = 0.0;

  static LeftCondition regular_at_zero() { return {Kind::regular, 0.0}; }
  static LeftCondition fixed(double v) { return {Kind::value, v}; }
};

// alpha*A + beta*A' + gamma*A'' = delta at the right end.
struct EdgeFunctional {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
};

enum class BvpMethod { collocation, imbedding };

inline const char* to_string(BvpMethod m) {
  return m == BvpMethod::collocation ? "gauss-collocation" : "imbedding-sweep";
}

struct BvpOptions {
  double tol = 1e-10;
  BvpMethod method = BvpMethod::collocation;
  double eps = 1e-6;          // start of the mesh when the left end is a regular singular point
  double mesh_factor = 1.0;   // < 1 gives a denser starting mesh
  std::size_t max_nodes = 2'000'000;
};

namespace detail {

// a*A + b*A' = g
struct Relation {
  double a = 0.0, b = 0.0, g = 0.0;
  void normalize() {
    const double n = std::hypot(a, b);
    a /= n;
    b /= n;
    g /= n;
  }
};

struct GaussTableau {
  static constexpr int s = 4;
  Eigen::Matrix4d A;
  Eigen::Vector4d b, c;

  static const GaussTableau& instance() {
    static const GaussTableau t;
    return t;
  }

 private:
  GaussTableau() {
    const double u = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double v = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    c << 0.5 * (1.0 - u), 0.5 * (1.0 - v), 0.5 * (1.0 + v), 0.5 * (1.0 + u);
    // Lagrange basis through c, integrated exactly from 0.
    Eigen::Matrix4d V;
    for (int i = 0; i < s; ++i)
      for (int k = 0; k < s; ++k) V(i, k) = std::pow(c[i], k);
    const Eigen::Matrix4d Vi = V.inverse();  // column j: monomial coefficients of l_j
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double acc = 0.0;
        for (int k = 0; k < s; ++k) acc += Vi(k, j) * std::pow(c[i], k + 1) / (k + 1);
        A(i, j) = acc;
      }
    for (int j = 0; j < s; ++j) {
      double acc = 0.0;
      for (int k = 0; k < s; ++k) acc += Vi(k, j) / (k + 1);
      b[j] = acc;
    }
  }
};

struct Problem {
  const LinearOde& ode;
  double s0, s1;  // mesh end points
  Relation left, right;
  bool regular;
};

inline Problem make_problem(const LinearOde& ode, double r_lo, double r_hi, const LeftCondition& lc,
                            const EdgeFunctional& rc, const BvpOptions& opt) {
  Problem pb{ode, r_lo, r_hi, {}, {}, lc.kind == LeftCondition::Kind::regular};
  if (pb.regular) {
    if (r_lo != 0.0) throw DomainError("solve_linear_bvp: regular left end requires r_lo = 0");
    pb.s0 = opt.eps;
    const double k = 1.0 + ode.singular_c;
    pb.left = {pb.s0 * ode.q(pb.s0) / k, 1.0, pb.s0 * ode.f(pb.s0) / k};
  } else {
    pb.left = {1.0, 0.0, lc.value};
  }
  if (!(pb.s1 > pb.s0)) throw DomainError("solve_linear_bvp: empty domain");
  const double p = ode.p(r_hi), q = ode.q(r_hi), f = ode.f(r_hi);
  pb.right = {rc.alpha - rc.gamma * q, rc.beta - rc.gamma * p, rc.delta - rc.gamma * f};
  if (pb.right.a == 0.0 && pb.right.b == 0.0)
    throw NumericalError(NumericalError::Kind::singular_system,
                         "solve_linear_bvp: right functional is degenerate");
  return pb;
}

inline double local_scale(const LinearOde& ode, double r) {
  return std::sqrt(std::abs(ode.q(r))) + 0.5 * std::abs(ode.p(r));
}

inline std::vector<double> initial_mesh(const Problem& pb, double theta) {
  const double H = (pb.s1 - pb.s0) / 16.0;
  std::vector<double> m{pb.s0};
  double r = pb.s0;
  while (r < pb.s1) {
    const double k0 = local_scale(pb.ode, r);
    double h = theta * std::min(H, k0 > 0.0 ? 1.0 / k0 : H);
    const double k1 = local_scale(pb.ode, std::min(r + h, pb.s1));
    if (k1 > k0) h = theta * std::min(H, 1.0 / k1);
    if (r + 1.25 * h >= pb.s1) {
      if (pb.s1 - r > 0.6 * h) m.push_back(0.5 * (r + pb.s1));
      r = pb.s1;
    } else {
      r += h;
    }
    m.push_back(r);
  }
  return m;
}

inline std::shared_ptr<MeshStore> finish_store(const Problem& pb, std::vector<double> mesh,
                                               const std::vector<double>& A,
                                               const std::vector<double>& dA) {
  auto st = std::make_shared<MeshStore>();
  st->ode = pb.ode;
  st->R = std::move(mesh);
  st->y.resize(st->R.size());
  for (std::size_t i = 0; i < st->R.size(); ++i) st->y[i] = st->node_derivs(st->R[i], A[i], dA[i]);
  if (pb.regular) {
    st->series_start = true;
    const double e = pb.s0, k = 1.0 + pb.ode.singular_c;
    const double q0 = pb.ode.q(e), f0 = pb.ode.f(e);
    st->A0 = (A[0] - f0 * e * e / (2.0 * k)) / (1.0 - q0 * e * e / (2.0 * k));
    st->A2 = (f0 - q0 * st->A0) / (2.0 * k);
  }
  return st;
}

// Global Gauss-Legendre (4-stage) collocation; the stages are condensed per interval into
// a 2x2 transfer map and the resulting block-bidiagonal system is solved with sparse LU.
inline std::shared_ptr<MeshStore> solve_collocation(const Problem& pb, const std::vector<double>& mesh) {
  const auto& gt = GaussTableau::instance();
  const std::size_t N = mesh.size() - 1;
  const Eigen::Index n = static_cast<Eigen::Index>(2 * (N + 1));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(6 * N + 4);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  trip.emplace_back(0, 0, pb.left.a);
  trip.emplace_back(0, 1, pb.left.b);
  rhs[0] = pb.left.g;

  using Mat8 = Eigen::Matrix<double, 8, 8>;
  using Mat82 = Eigen::Matrix<double, 8, 2>;
  for (std::size_t i = 0; i < N; ++i) {
    const double r0 = mesh[i], h = mesh[i + 1] - r0;
    Mat8 S = Mat8::Identity();
    Mat82 G = Mat82::Zero();
    Eigen::Matrix<double, 8, 1> bv = Eigen::Matrix<double, 8, 1>::Zero();
    for (int a = 0; a < 4; ++a) {
      const double t = r0 + gt.c[a] * h;
      Eigen::Matrix2d M;
      M << 0.0, 1.0, -pb.ode.q(t), -pb.ode.p(t);
      for (int b = 0; b < 4; ++b) S.block<2, 2>(2 * a, 2 * b) -= h * gt.A(a, b) * M;
      G.block<2, 2>(2 * a, 0) = M;
      bv[2 * a + 1] = pb.ode.f(t);
    }
    Eigen::PartialPivLU<Mat8> lu(S);
    const Mat82 P = lu.solve(G);
    const Eigen::Matrix<double, 8, 1> w = lu.solve(bv);
    Eigen::Matrix2d T = Eigen::Matrix2d::Identity();
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (int a = 0; a < 4; ++a) {
      T += h * gt.b[a] * P.block<2, 2>(2 * a, 0);
      s += h * gt.b[a] * w.segment<2>(2 * a);
    }
    const Eigen::Index row = static_cast<Eigen::Index>(1 + 2 * i);
    const Eigen::Index col = static_cast<Eigen::Index>(2 * i);
    for (int k = 0; k < 2; ++k) {
      trip.emplace_back(row + k, col + 2 + k, 1.0);
      for (int j = 0; j < 2; ++j) trip.emplace_back(row + k, col + j, -T(k, j));
      rhs[row + k] = s[k];
    }
  }
  trip.emplace_back(n - 1, n - 2, pb.right.a);
  trip.emplace_back(n - 1, n - 1, pb.right.b);
  rhs[n - 1] = pb.right.g;

  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(K);
  solver.factorize(K);
  if (solver.info() != Eigen::Success)
    throw NumericalError(NumericalError::Kind::singular_system,
                         "solve_linear_bvp: singular system (collocation factorization failed)");
  const Eigen::VectorXd y = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !y.allFinite())
    throw NumericalError(NumericalError::Kind::singular_system,
                         "solve_linear_bvp: singular system (collocation solve failed)");
  std::vector<double> A(N + 1), dA(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    A[i] = y[static_cast<Eigen::Index>(2 * i)];
    dA[i] = y[static_cast<Eigen::Index>(2 * i + 1)];
  }
  return finish_store(pb, mesh, A, dA);
}

// Dormand-Prince 5(4) transport of a boundary relation a*A + b*A' = g along the ODE.
// The relation obeys the adjoint system a' = q b, b' = p b - a, g' = f b and is
// renormalised after every step, which keeps the sweep stable in both directions.
inline Relation transport(const LinearOde& ode, Relation rel, double r0, double r1, double tol) {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double e[7] = {35.0 / 384 - 5179.0 / 57600, 0.0, 500.0 / 1113 - 7571.0 / 16695,
                                  125.0 / 192 - 393.0 / 640, -2187.0 / 6784 + 92097.0 / 339200,
                                  11.0 / 84 - 187.0 / 2100, -1.0 / 40};
  auto rhs = [&ode](double r, const std::array<double, 3>& y) {
    return std::array<double, 3>{ode.q(r) * y[1], ode.p(r) * y[1] - y[0], ode.f(r) * y[1]};
  };
  const double span = r1 - r0;
  if (span == 0.0) return rel;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  double r = r0;
  double h = span;
  const double k0 = local_scale(ode, r0);
  if (k0 > 0.0) h = dir * std::min(std::abs(span), 0.1 / k0);
  std::array<double, 3> y{rel.a, rel.b, rel.g};
  std::array<std::array<double, 3>, 7> k;
  k[0] = rhs(r, y);
  for (int guard = 0; guard < 10'000'000; ++guard) {
    if (dir * (r + h - r1) > 0.0) h = r1 - r;
    for (int s = 1; s < 7; ++s) {
      std::array<double, 3> ys = y;
      for (int j = 0; j < s; ++j)
        for (int m = 0; m < 3; ++m) ys[m] += h * a[s][j] * k[j][m];
      k[s] = rhs(r + c[s] * h, ys);
    }
    std::array<double, 3> yn = y, err{};
    for (int m = 0; m < 3; ++m) {
      for (int j = 0; j < 6; ++j) yn[m] += h * a[6][j] * k[j][m];  // 5th-order weights
      for (int j = 0; j < 7; ++j) err[m] += h * e[j] * k[j][m];
    }
    const double norm_ab = std::max(1.0, std::hypot(yn[0], yn[1]));
    double en = 0.0;
    for (int m = 0; m < 3; ++m) {
      const double sc = tol * (m < 2 ? norm_ab : std::max({norm_ab, std::abs(yn[2]), std::abs(y[2])}));
      en = std::max(en, std::abs(err[m]) / sc);
    }
    if (en <= 1.0 || std::abs(h) < 1e-14 * std::max(1.0, std::abs(r))) {
      r += h;
      const double nrm = std::hypot(yn[0], yn[1]);
      for (double& v : yn) v /= nrm;
      y = yn;
      if (dir * (r - r1) >= 0.0) break;
      k[0] = rhs(r, y);
    }
    const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }
  return Relation{y[0], y[1], y[2]};
}

inline std::shared_ptr<MeshStore> solve_imbedding(const Problem& pb, const std::vector<double>& mesh,
                                                  double tol) {
  const std::size_t n = mesh.size();
  std::vector<Relation> L(n), R(n);
  L[0] = pb.left;
  L[0].normalize();
  for (std::size_t i = 1; i < n; ++i) L[i] = transport(pb.ode, L[i - 1], mesh[i - 1], mesh[i], tol);
  R[n - 1] = pb.right;
  R[n - 1].normalize();
  for (std::size_t i = n - 1; i-- > 0;) R[i] = transport(pb.ode, R[i + 1], mesh[i + 1], mesh[i], tol);
  std::vector<double> A(n), dA(n);
  double best_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double det = L[i].a * R[i].b - L[i].b * R[i].a;
    best_det = std::max(best_det, std::abs(det));
    A[i] = (L[i].g * R[i].b - L[i].b * R[i].g) / det;
    dA[i] = (L[i].a * R[i].g - L[i].g * R[i].a) / det;
  }
  if (best_det < 1e-10)
    throw NumericalError(NumericalError::Kind::singular_system,
                         "solve_linear_bvp: singular system (boundary relations are parallel)", best_det);
  return finish_store(pb, mesh, A, dA);
}

inline std::vector<double> bisect_all(const std::vector<double>& m) {
  std::vector<double> out;
  out.reserve(2 * m.size());
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    out.push_back(m[i]);
    out.push_back(0.5 * (m[i] + m[i + 1]));
  }
  out.push_back(m.back());
  return out;
}

}  // namespace detail

// Solves A'' + p A' + q A = f on [r_lo, r_hi] with a regular (or Dirichlet) left end and a
// linear functional of (A, A', A'') on the right. The mesh is refined until the dense
// interpolant satisfies the equation to `tol` (relative to the largest term).
inline RadialSolution solve_linear_bvp(const LinearOde& ode, double r_lo, double r_hi,
                                       const LeftCondition& left, const EdgeFunctional& right,
                                       const BvpOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw DomainError("solve_linear_bvp: tol must be positive");
  const detail::Problem pb = detail::make_problem(ode, r_lo, r_hi, left, right, opt);
  const bool colloc = opt.method == BvpMethod::collocation;
  const double theta = (colloc ? 0.35 : 0.5) * opt.mesh_factor;
  std::vector<double> mesh = detail::initial_mesh(pb, theta);

  auto solve_on = [&](const std::vector<double>& m) {
    return colloc ? detail::solve_collocation(pb, m) : detail::solve_imbedding(pb, m, 1e-3 * opt.tol);
  };

  std::shared_ptr<detail::MeshStore> store;
  double worst = 0.0;
  for (;;) {
    store = solve_on(mesh);
    std::vector<double> refined;
    refined.reserve(mesh.size() * 2);
    worst = 0.0;
    bool any = false;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      refined.push_back(mesh[i]);
      double r = 0.0;
      for (double t : {0.2113, 0.5, 0.7887}) r = std::max(r, store->residual(mesh[i] + t * (mesh[i + 1] - mesh[i])));
      worst = std::max(worst, r);
      if (r > 0.25 * opt.tol) {
        refined.push_back(0.5 * (mesh[i] + mesh[i + 1]));
        any = true;
      }
    }
    refined.push_back(mesh.back());
    if (any && refined.size() > opt.max_nodes)
      throw NumericalError(NumericalError::Kind::tolerance_not_met,
                           "solve_linear_bvp: tolerance not met within node budget (achieved residual " +
                               std::to_string(worst) + ")",
                           worst);
    if (!any) break;
    mesh = std::move(refined);
  }

  double achieved = worst;
  if (colloc) {
    // Global error estimate against the uniformly bisected mesh; the finer solution is kept.
    for (;;) {
      auto fine_mesh = detail::bisect_all(mesh);
      auto fine = solve_on(fine_mesh);
      double sA = 0.0, sdA = 0.0, eA = 0.0, edA = 0.0;
      for (std::size_t i = 0; i < mesh.size(); ++i) {
        const auto& f = fine->y[2 * i];
        const auto& c = store->y[i];
        sA = std::max(sA, std::abs(f[0]));
        sdA = std::max(sdA, std::abs(f[1]));
        eA = std::max(eA, std::abs(f[0] - c[0]));
        edA = std::max(edA, std::abs(f[1] - c[1]));
      }
      const double est = std::max(sA > 0.0 ? eA / sA : eA, sdA > 0.0 ? edA / sdA : edA);
      store = fine;
      mesh = std::move(fine_mesh);
      achieved = std::max(worst, est);
      if (est <= opt.tol) break;
      if (2 * mesh.size() > opt.max_nodes)
        throw NumericalError(NumericalError::Kind::tolerance_not_met,
                             "solve_linear_bvp: tolerance not met (achieved " + std::to_string(est) + ")",
                             est);
    }
  }
  RadialSolution::Meta meta;
  meta.method = to_string(opt.method);
  meta.tol_achieved = achieved;
  return RadialSolution::from_mesh(store, meta);
}

}  // namespace layerlab
