#pragma once

// Geometry in E^{3,1}: realization of angled polyhedra as face normals,
// Newton refinement, Gram matrices, vertices, cutting planes, mutation as a
// Lorentz rotation and the reflection group as 2x2 complex matrices.

#include <polymut/combinat.hpp>
#include <polymut/multiprecision.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polymut {

struct NotRealizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CombinatoricsMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonCompact : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPerpendicularizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateBasis : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StraddlingFace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec4 = std::array<Real, 4>;
using Mat4 = std::array<Vec4, 4>;  // row-major

inline constexpr std::uint64_t kDefaultSolverSeed = 0xC0FE7E2;
inline constexpr const char* kGaugeTag = "v1=e_z;v2:t=x=0,y<0;v3:t=0,x<0";

/// −u_t v_t + u_x v_x + u_y v_y + u_z v_z.
template <class T>
T minkowski_inner(const std::array<T, 4>& u, const std::array<T, 4>& v) {
  return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}

namespace detail {

template <class T>
T det3(const T& a00, const T& a01, const T& a02, const T& a10, const T& a11, const T& a12, const T& a20,
       const T& a21, const T& a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) + a02 * (a10 * a21 - a11 * a20);
}

/// Euclidean normal to three vectors in R^4: p·x = det[a; b; c; x].
template <class T>
std::array<T, 4> cross4(const std::array<T, 4>& a, const std::array<T, 4>& b, const std::array<T, 4>& c) {
  std::array<T, 4> p;
  for (int i = 0; i < 4; ++i) {
    int cols[3];
    for (int j = 0, k = 0; j < 4; ++j)
      if (j != i) cols[k++] = j;
    T m = det3<T>(a[cols[0]], a[cols[1]], a[cols[2]], b[cols[0]], b[cols[1]], b[cols[2]], c[cols[0]],
                  c[cols[1]], c[cols[2]]);
    p[i] = (i % 2 == 0) ? T(-m) : m;
  }
  return p;
}

template <class T>
std::array<T, 4> lower_index(std::array<T, 4> v) {
  v[0] = -v[0];
  return v;
}

/// Lorentz-orthogonal complement direction of three vectors.
template <class T>
std::array<T, 4> lorentz_normal(const std::array<T, 4>& a, const std::array<T, 4>& b, const std::array<T, 4>& c) {
  return cross4(lower_index(a), lower_index(b), lower_index(c));
}

template <class T>
std::array<T, 4> scaled(const std::array<T, 4>& v, const T& s) {
  return {v[0] * s, v[1] * s, v[2] * s, v[3] * s};
}

/// The future-pointing unit timelike point on three planes, if timelike.
template <class T>
std::optional<std::array<T, 4>> plane_triple_point(const std::array<T, 4>& a, const std::array<T, 4>& b,
                                                   const std::array<T, 4>& c) {
  std::array<T, 4> p = lorentz_normal(a, b, c);
  const T n2 = minkowski_inner(p, p);
  if (!(n2 < 0)) return std::nullopt;
  using std::sqrt;
  T s = T(1) / sqrt(T(-n2));
  if (p[0] < 0) s = -s;
  return scaled(p, s);
}

}  // namespace detail

/// Outward face normals (timelike coordinate first) of a realized polyhedron.
struct RealizedPolyhedron {
  AngledPolyhedron poly;
  std::vector<Vec4> normals;
  unsigned digits = 0;
  /// Largest absolute residual of the defining equations.
  Real residual;
  std::string gauge = kGaugeTag;
  std::uint64_t seed = kDefaultSolverSeed;
  int restart = -1;
  /// Max-norm residual after each Newton step of the last refinement.
  std::vector<Real> newton_history;
};

struct RealizeConfig {
  unsigned digits = 50;
  int restarts = 64;
  std::uint64_t seed = kDefaultSolverSeed;
  int lm_iterations = 600;
};

// ---------------------------------------------------------------------------
// Residual equations

namespace detail {

inline double cos_pi_over(int n) { return std::cos(3.14159265358979323846 / n); }

inline Real cos_pi_over_real(int n) { return cos(pi() / n); }

/// Double-precision Levenberg-Marquardt on the full 4F unknowns.
inline bool levenberg_marquardt(const AngledPolyhedron& p, Eigen::VectorXd& x, int max_iter) {
  const std::size_t F = p.num_faces();
  const auto& edges = p.edges();
  // Disjoint non-adjacent planes enter as one-sided penalties, which keeps the
  // iteration away from solutions of the edge equations with the wrong shape.
  std::vector<std::pair<std::size_t, std::size_t>> apart;
  for (std::size_t i = 0; i < F; ++i)
    for (std::size_t j = i + 1; j < F; ++j)
      if (!p.adjacent(i, j)) apart.emplace_back(i, j);
  const std::size_t m = F + edges.size() + apart.size();
  const Eigen::Index nv = static_cast<Eigen::Index>(4 * F);
  std::vector<double> target(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) target[e] = -cos_pi_over(edges[e].n);
  auto ip = [&](const Eigen::VectorXd& v, std::size_t a, std::size_t b) {
    const auto i = static_cast<Eigen::Index>(4 * a);
    const auto j = static_cast<Eigen::Index>(4 * b);
    return -v[i] * v[j] + v[i + 1] * v[j + 1] + v[i + 2] * v[j + 2] + v[i + 3] * v[j + 3];
  };
  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < F; ++i) r[static_cast<Eigen::Index>(i)] = ip(v, i, i) - 1.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      r[static_cast<Eigen::Index>(F + e)] = ip(v, edges[e].a, edges[e].b) - target[e];
    for (std::size_t k = 0; k < apart.size(); ++k)
      r[static_cast<Eigen::Index>(F + edges.size() + k)] = std::max(0.0, ip(v, apart[k].first, apart[k].second) + 1.0);
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), nv);
    const double s[4] = {-1, 1, 1, 1};
    for (std::size_t i = 0; i < F; ++i)
      for (int c = 0; c < 4; ++c)
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(4 * i + c)) =
            2 * s[c] * v[static_cast<Eigen::Index>(4 * i + c)];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto row = static_cast<Eigen::Index>(F + e);
      for (int c = 0; c < 4; ++c) {
        J(row, static_cast<Eigen::Index>(4 * edges[e].a + c)) = s[c] * v[static_cast<Eigen::Index>(4 * edges[e].b + c)];
        J(row, static_cast<Eigen::Index>(4 * edges[e].b + c)) = s[c] * v[static_cast<Eigen::Index>(4 * edges[e].a + c)];
      }
    }
    for (std::size_t k = 0; k < apart.size(); ++k) {
      const auto [a, b] = apart[k];
      if (ip(v, a, b) + 1.0 <= 0) continue;
      const auto row = static_cast<Eigen::Index>(F + edges.size() + k);
      for (int c = 0; c < 4; ++c) {
        J(row, static_cast<Eigen::Index>(4 * a + c)) = s[c] * v[static_cast<Eigen::Index>(4 * b + c)];
        J(row, static_cast<Eigen::Index>(4 * b + c)) = s[c] * v[static_cast<Eigen::Index>(4 * a + c)];
      }
    }
    return J;
  };
  Eigen::VectorXd r = residual(x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iter; ++it) {
    if (r.lpNorm<Eigen::Infinity>() < 1e-13) return true;
    const Eigen::MatrixXd J = jacobian(x);
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      Eigen::MatrixXd D = A;
      D.diagonal().array() += lambda * (1.0 + A.diagonal().array());
      const Eigen::VectorXd step = D.ldlt().solve(-g);
      const Eigen::VectorXd trial = x + step;
      const Eigen::VectorXd rt = residual(trial);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        x = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 5, 1e-15);
        improved = true;
      } else {
        lambda *= 8;
      }
    }
    if (!improved) break;
  }
  return r.lpNorm<Eigen::Infinity>() < 1e-11;
}

/// Portable standard normal deviates (Box-Muller over raw 64-bit draws) so
/// seeds reproduce across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * 3.14159265358979323846 * u2);
    return r * std::cos(2 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 rng_;
  std::optional<double> spare_;
};

/// Restart 0 places caps near ±e_z and lateral faces around a horizontal
/// circle when the face names carry that structure; later restarts are
/// Gaussian with the timelike part damped.
inline Eigen::VectorXd seed_vector(const AngledPolyhedron& p, int restart, std::uint64_t seed) {
  const std::size_t F = p.num_faces();
  Eigen::VectorXd x(static_cast<Eigen::Index>(4 * F));
  NormalStream normal(seed + static_cast<std::uint64_t>(restart) * 0x9E3779B97F4A7C15ULL);
  bool structured = restart == 0;
  for (const auto& f : p.faces())
    structured = structured && (f.rfind("lat_", 0) == 0 || f.size() > 4);
  for (std::size_t i = 0; i < F; ++i) {
    const auto base = static_cast<Eigen::Index>(4 * i);
    const std::string& f = p.face(i);
    std::array<double, 4> v{normal.next() * 0.3, normal.next(), normal.next(), normal.next()};
    if (structured) {
      const double jitter[3] = {normal.next() * 0.05, normal.next() * 0.05, normal.next() * 0.05};
      if (f.rfind("lat_", 0) == 0) {
        const double ang = 2 * 3.14159265358979323846 * (f.back() - '0') / 3.0;
        v = {0.1, std::cos(ang), std::sin(ang), jitter[0]};
      } else if (f.size() > 4 && f.compare(f.size() - 4, 4, "_top") == 0) {
        v = {0.5, jitter[0] + 0.4 * std::cos(static_cast<double>(i)), jitter[1] + 0.4 * std::sin(static_cast<double>(i)), 1.0};
      } else if (f.size() > 4 && f.compare(f.size() - 4, 4, "_bot") == 0) {
        v = {0.5, jitter[0] + 0.4 * std::cos(static_cast<double>(i)), jitter[1] + 0.4 * std::sin(static_cast<double>(i)), -1.0};
      }
      v[0] += jitter[2];
    }
    for (int c = 0; c < 4; ++c) x[base + c] = v[static_cast<std::size_t>(c)];
  }
  return x;
}

/// Faces incident to each combinatorial vertex must be exactly the plane
/// triples whose intersection point lies in the closed polyhedron. Interior
/// points p satisfy <p, v> > 0 for all normals v of non-incident faces.
template <class T>
bool geometric_vertices_match(const AngledPolyhedron& p, const std::vector<std::array<T, 4>>& V, const T& tol) {
  const std::size_t F = p.num_faces();
  std::set<Triple> expected;
  for (const auto& v : p.vertices()) expected.insert(v);
  std::set<Triple> found;
  for (std::size_t i = 0; i < F; ++i)
    for (std::size_t j = i + 1; j < F; ++j)
      for (std::size_t k = j + 1; k < F; ++k) {
        const auto pt = plane_triple_point(V[i], V[j], V[k]);
        if (!pt) continue;
        bool inside = true;
        for (std::size_t l = 0; l < F && inside; ++l) {
          if (l == i || l == j || l == k) continue;
          inside = minkowski_inner(*pt, V[l]) > tol;
        }
        if (inside) found.insert({i, j, k});
      }
  return found == expected;
}

/// Adjacency read off the normals: |<v_i, v_j>| < 1 exactly for edges and
/// the edge values match their angles; non-adjacent planes are disjoint.
template <class T>
bool geometric_adjacency_matches(const AngledPolyhedron& p, const std::vector<std::array<T, 4>>& V, const T& tol) {
  const std::size_t F = p.num_faces();
  for (std::size_t i = 0; i < F; ++i)
    for (std::size_t j = i + 1; j < F; ++j) {
      const T g = minkowski_inner(V[i], V[j]);
      if (p.adjacent(i, j)) {
        if (!(g > T(-1) + tol && g < T(1) - tol)) return false;
      } else if (!(g < T(-1) - tol)) {
        return false;
      }
    }
  return true;
}

/// Lorentz frame putting vertex (0,1,2) at (1,0,0,0), v_0 on e_z, v_1 in the
/// (y,z)-plane with y < 0 and v_2 with x < 0; returns transformed normals.
inline std::vector<Vec4> canonical_gauge(const std::vector<Vec4>& V) {
  if (V.size() < 3) throw std::invalid_argument("gauge needs at least three faces");
  const auto pt = plane_triple_point(V[0], V[1], V[2]);
  if (!pt) throw NotRealizable("faces 1, 2, 3 do not meet at a finite vertex");
  const Vec4& p = *pt;
  const Vec4& ez = V[0];
  Vec4 ey;
  const Real c01 = minkowski_inner(V[1], V[0]);
  for (int c = 0; c < 4; ++c) ey[c] = V[0][c] * c01 - V[1][c];
  ey = scaled(ey, Real(1 / sqrt(minkowski_inner(ey, ey))));
  Vec4 ex = lorentz_normal(p, ez, ey);
  ex = scaled(ex, Real(1 / sqrt(minkowski_inner(ex, ex))));
  if (minkowski_inner(V[2], ex) > 0) ex = scaled(ex, Real(-1));
  std::vector<Vec4> out;
  out.reserve(V.size());
  for (const auto& v : V)
    out.push_back({Real(-minkowski_inner(v, p)), minkowski_inner(v, ex), minkowski_inner(v, ey), minkowski_inner(v, ez)});
  // The first three rows are exact by construction.
  out[0] = {Real(0), Real(0), Real(0), Real(1)};
  out[1][0] = 0;
  out[1][1] = 0;
  out[2][0] = 0;
  return out;
}

struct NewtonLayout {
  std::vector<std::pair<std::size_t, int>> vars;  // (face, coordinate)
};

inline NewtonLayout newton_layout(std::size_t F) {
  NewtonLayout l;
  l.vars = {{1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};
  for (std::size_t f = 3; f < F; ++f)
    for (int c = 0; c < 4; ++c) l.vars.emplace_back(f, c);
  return l;
}

inline Real max_residual(const AngledPolyhedron& p, const std::vector<Vec4>& V) {
  Real worst(0);
  for (std::size_t i = 0; i < V.size(); ++i) worst = max(worst, Real(abs(minkowski_inner(V[i], V[i]) - 1)));
  for (const auto& e : p.edges())
    worst = max(worst, Real(abs(minkowski_inner(V[e.a], V[e.b]) + cos_pi_over_real(e.n))));
  return worst;
}

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
inline bool solve_linear(std::vector<std::vector<Real>>& A, std::vector<Real>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = A[r][col] / A[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = i + 1; c < n; ++c) b[i] -= A[i][c] * b[c];
    b[i] /= A[i][i];
  }
  return true;
}

/// Newton iteration on the gauge-reduced square system (4F − 7 unknowns,
/// F − 1 norm equations and E = 3F − 6 edge equations).
inline std::vector<Vec4> newton_refine(const AngledPolyhedron& p, std::vector<Vec4> V, unsigned digits,
                                       std::vector<Real>* history) {
  const std::size_t F = p.num_faces();
  const auto layout = newton_layout(F);
  const std::size_t n = layout.vars.size();
  const auto& edges = p.edges();
  if (F - 1 + edges.size() != n) throw NotRealizable("equation count does not match the gauge-reduced unknowns");
  PrecisionGuard guard(digits + 20);
  for (auto& v : V)
    for (auto& c : v) c = at_working_precision(c);
  std::vector<std::size_t> col_of(4 * F, n);
  for (std::size_t k = 0; k < n; ++k) col_of[4 * layout.vars[k].first + static_cast<std::size_t>(layout.vars[k].second)] = k;
  std::vector<Real> target;
  for (const auto& e : edges) target.push_back(Real(-cos_pi_over_real(e.n)));
  const Real floor_tol = ten_pow(-static_cast<long>(digits) - 12);
  const Real sign[4] = {Real(-1), Real(1), Real(1), Real(1)};
  if (history) history->clear();
  for (int it = 0; it < 80; ++it) {
    std::vector<Real> r;
    std::vector<std::vector<Real>> J(n, std::vector<Real>(n, Real(0)));
    std::size_t row = 0;
    for (std::size_t i = 1; i < F; ++i, ++row) {
      r.push_back(minkowski_inner(V[i], V[i]) - 1);
      for (int c = 0; c < 4; ++c) {
        const auto col = col_of[4 * i + static_cast<std::size_t>(c)];
        if (col < n) J[row][col] = 2 * sign[c] * V[i][c];
      }
    }
    for (std::size_t e = 0; e < edges.size(); ++e, ++row) {
      const auto a = edges[e].a;
      const auto b = edges[e].b;
      r.push_back(minkowski_inner(V[a], V[b]) - target[e]);
      for (int c = 0; c < 4; ++c) {
        const auto ca = col_of[4 * a + static_cast<std::size_t>(c)];
        const auto cb = col_of[4 * b + static_cast<std::size_t>(c)];
        if (ca < n) J[row][ca] += sign[c] * V[b][c];
        if (cb < n) J[row][cb] += sign[c] * V[a][c];
      }
    }
    Real worst(0);
    for (const auto& x : r) worst = max(worst, Real(abs(x)));
    if (history) history->push_back(worst);
    if (worst < floor_tol) return V;
    if (!solve_linear(J, r)) throw NoConvergence("singular Jacobian in Newton refinement");
    for (std::size_t k = 0; k < n; ++k) V[layout.vars[k].first][static_cast<std::size_t>(layout.vars[k].second)] -= r[k];
  }
  const Real final_res = max_residual(p, V);
  if (history) history->push_back(final_res);
  if (final_res > ten_pow(-static_cast<long>(digits) + 10)) throw NoConvergence("Newton refinement did not converge");
  return V;
}

inline void check_realization(const AngledPolyhedron& p, const std::vector<Vec4>& V, unsigned digits) {
  PrecisionGuard guard(digits + 20);
  const Real tol = ten_pow(-static_cast<long>(digits) / 2);
  if (!geometric_adjacency_matches(p, V, tol)) throw CombinatoricsMismatch("adjacency of the solution differs from the input");
  if (!geometric_vertices_match(p, V, tol)) throw CombinatoricsMismatch("vertices of the solution differ from the input");
}

}  // namespace detail

/// Newton refinement of a realization to `digits` digits; the gauge is kept.
inline RealizedPolyhedron refine(const RealizedPolyhedron& r, unsigned digits) {
  if (r.normals.size() != r.poly.num_faces() || r.normals.size() < 4) throw NoConvergence("refine: no realization to refine");
  RealizedPolyhedron out = r;
  std::vector<Vec4> V;
  {
    PrecisionGuard guard(digits + 20);
    V = detail::canonical_gauge(r.normals);
  }
  out.normals = detail::newton_refine(r.poly, std::move(V), digits, &out.newton_history);
  out.digits = digits;
  PrecisionGuard guard(digits + 20);
  out.residual = detail::max_residual(r.poly, out.normals);
  if (out.residual > ten_pow(-static_cast<long>(digits) + 10)) throw NoConvergence("refine: residual too large");
  return out;
}

/// Solve for outward unit normals: damped least squares in double precision
/// from deterministic seeds, then Newton in MPFR on the gauge-reduced system.
/// The accepted solution is the lowest restart index that converges to the
/// input combinatorics.
inline RealizedPolyhedron realize(const AngledPolyhedron& p, const RealizeConfig& cfg = {}) {
  const Diagnostics diag = validate(p);
  if (!diag.ok()) throw NotRealizable("validation failed: " + diag.failures.front());
  if (!p.is_vertex(0, 1, 2)) throw NotRealizable("faces 1, 2, 3 must meet at a vertex (gauge)");
  const std::size_t F = p.num_faces();
  std::string last_error = "no restart converged";
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Eigen::VectorXd x = detail::seed_vector(p, restart, cfg.seed);
    if (!detail::levenberg_marquardt(p, x, cfg.lm_iterations)) continue;
    std::vector<std::array<double, 4>> Vd(F);
    for (std::size_t i = 0; i < F; ++i)
      for (int c = 0; c < 4; ++c) Vd[i][static_cast<std::size_t>(c)] = x[static_cast<Eigen::Index>(4 * i + c)];
    // The equations do not see the sign of the normals; pick the outward one.
    if (!detail::geometric_vertices_match(p, Vd, 1e-9)) {
      for (auto& v : Vd)
        for (auto& c : v) c = -c;
      if (!detail::geometric_vertices_match(p, Vd, 1e-9)) {
        last_error = "converged to different combinatorics";
        continue;
      }
    }
    if (!detail::geometric_adjacency_matches(p, Vd, 1e-9)) {
      last_error = "converged to different adjacency";
      continue;
    }
    try {
      RealizedPolyhedron r;
      r.poly = p;
      r.seed = cfg.seed;
      r.restart = restart;
      std::vector<Vec4> V(F);
      {
        PrecisionGuard guard(cfg.digits + 20);
        for (std::size_t i = 0; i < F; ++i)
          for (int c = 0; c < 4; ++c) V[i][static_cast<std::size_t>(c)] = Real(Vd[i][static_cast<std::size_t>(c)]);
        V = detail::canonical_gauge(V);
      }
      r.normals = detail::newton_refine(p, std::move(V), cfg.digits, &r.newton_history);
      detail::check_realization(p, r.normals, cfg.digits);
      r.digits = cfg.digits;
      PrecisionGuard guard(cfg.digits + 20);
      r.residual = detail::max_residual(p, r.normals);
      return r;
    } catch (const NoConvergence& e) {
      last_error = e.what();
    } catch (const CombinatoricsMismatch& e) {
      last_error = e.what();
    }
  }
  throw NotRealizable("realize: " + last_error + " after " + std::to_string(cfg.restarts) + " restarts");
}

inline RealizedPolyhedron realize(const AngledPolyhedron& p, unsigned digits) {
  RealizeConfig cfg;
  cfg.digits = digits;
  return realize(p, cfg);
}

/// Re-expresses normals in the canonical gauge (idempotent).
inline RealizedPolyhedron canonicalize(const RealizedPolyhedron& r) {
  RealizedPolyhedron out = r;
  PrecisionGuard guard(r.digits + 20);
  out.normals = detail::canonical_gauge(r.normals);
  return out;
}

using GramMatrix = std::vector<std::vector<Real>>;

/// G_ij = 2<v_i, v_j>.
inline GramMatrix gram(const RealizedPolyhedron& r) {
  PrecisionGuard guard(r.digits + 20);
  const std::size_t F = r.normals.size();
  GramMatrix G(F, std::vector<Real>(F));
  for (std::size_t i = 0; i < F; ++i)
    for (std::size_t j = 0; j < F; ++j) G[i][j] = 2 * minkowski_inner(r.normals[i], r.normals[j]);
  return G;
}

/// Number of negative eigenvalues of a symmetric matrix (double precision
/// is ample: entries are O(10) and the spectrum is well separated from 0
/// apart from the F − 4 exact zeros, which are counted as zero).
inline int negative_eigenvalues(const GramMatrix& G, double zero_tol = 1e-20) {
  const auto n = static_cast<Eigen::Index>(G.size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].convert_to<double>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  int neg = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()[i] < -std::max(zero_tol, 1e-9 * scale)) ++neg;
  return neg;
}

struct PolyVertex {
  Triple faces;
  Vec4 point;
};

/// Vertices as unit future-pointing timelike points.
inline std::vector<PolyVertex> vertices(const RealizedPolyhedron& r) {
  PrecisionGuard guard(r.digits + 20);
  std::vector<PolyVertex> out;
  for (const auto& t : r.poly.vertices()) {
    const auto pt = detail::plane_triple_point(r.normals[t[0]], r.normals[t[1]], r.normals[t[2]]);
    if (!pt) throw NonCompact("vertex " + r.poly.face(t[0]) + "/" + r.poly.face(t[1]) + "/" + r.poly.face(t[2]) + " is not timelike");
    out.push_back({t, *pt});
  }
  return out;
}

struct CuttingPlane {
  Vec4 normal;
  PrismaticCircuit circuit;
};

/// Unit spacelike normal perpendicular to the circuit faces, signed so that
/// vertices on the side holding the first non-circuit face have <p, n> < 0.
inline CuttingPlane cutting_plane(const RealizedPolyhedron& r, const PrismaticCircuit& c) {
  if (!c.eligible()) throw IneligibleCircuit("cutting_plane: circuit angles are not all equal");
  PrecisionGuard guard(r.digits + 20);
  const auto& V = r.normals;
  Vec4 n = detail::lorentz_normal(V[c.faces[0]], V[c.faces[1]], V[c.faces[2]]);
  const Real n2 = minkowski_inner(n, n);
  if (!(n2 > ten_pow(-static_cast<long>(r.digits) / 2))) throw NotPerpendicularizable("complement of the circuit normals is not spacelike");
  n = detail::scaled(n, Real(1 / sqrt(n2)));
  std::size_t ref = 0;
  while (ref == c.faces[0] || ref == c.faces[1] || ref == c.faces[2]) ++ref;
  // Sum over the reference face's vertices decides the sign.
  Real s(0);
  for (const auto& v : vertices(r))
    if (v.faces[0] == ref || v.faces[1] == ref || v.faces[2] == ref) s += minkowski_inner(v.point, n);
  if (s > 0) n = detail::scaled(n, Real(-1));
  return {n, c};
}

/// Rot = [v2 v3 v1 n]·[v1 v2 v3 n]^(−1) on column vectors: fixes n and
/// cycles the circuit normals.
inline Mat4 mutation_rotation(const RealizedPolyhedron& r, const PrismaticCircuit& c, const CuttingPlane& plane) {
  PrecisionGuard guard(r.digits + 20);
  const auto& V = r.normals;
  const Vec4 cols_src[4] = {V[c.faces[0]], V[c.faces[1]], V[c.faces[2]], plane.normal};
  const Vec4 cols_dst[4] = {V[c.faces[1]], V[c.faces[2]], V[c.faces[0]], plane.normal};
  // Solve Rot · S = D, i.e. Sᵀ Rotᵀ = Dᵀ, row by row of Rot.
  Mat4 rot;
  for (int i = 0; i < 4; ++i) {
    std::vector<std::vector<Real>> A(4, std::vector<Real>(4));
    std::vector<Real> b(4);
    for (int k = 0; k < 4; ++k) {
      for (int j = 0; j < 4; ++j) A[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = cols_src[k][static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(k)] = cols_dst[k][static_cast<std::size_t>(i)];
    }
    if (!detail::solve_linear(A, b)) throw DegenerateBasis("circuit normals and cutting plane are linearly dependent");
    for (int j = 0; j < 4; ++j) rot[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b[static_cast<std::size_t>(j)];
  }
  return rot;
}

inline Vec4 apply(const Mat4& m, const Vec4& v) {
  Vec4 out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3];
  return out;
}

inline Mat4 multiply(const Mat4& a, const Mat4& b) {
  Mat4 out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] + a[i][3] * b[3][j];
  return out;
}

/// max |RotᵀJRot − J| and max |Rot³ − I|.
inline std::pair<Real, Real> rotation_defects(const Mat4& rot) {
  Real iso(0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Real s = -rot[0][i] * rot[0][j] + rot[1][i] * rot[1][j] + rot[2][i] * rot[2][j] + rot[3][i] * rot[3][j];
      const Real target = i == j ? Real(i == 0 ? -1 : 1) : Real(0);
      iso = max(iso, Real(abs(s - target)));
    }
  const Mat4 cube = multiply(rot, multiply(rot, rot));
  Real order(0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) order = max(order, Real(abs(cube[i][j] - (i == j ? 1 : 0))));
  return {iso, order};
}

/// Side of each face w.r.t. the cutting plane from its vertices: -1 on the
/// side holding the first non-circuit face, +1 on the other, 0 on the circuit.
inline std::vector<int> plane_sides(const RealizedPolyhedron& r, const CuttingPlane& plane) {
  PrecisionGuard guard(r.digits + 20);
  const Real tol = ten_pow(-static_cast<long>(r.digits) / 2);
  const std::size_t F = r.poly.num_faces();
  std::vector<int> side(F, 2);
  for (auto f : plane.circuit.faces) side[f] = 0;
  for (const auto& v : vertices(r)) {
    const Real s = minkowski_inner(v.point, plane.normal);
    const int sgn = s > tol ? 1 : s < -tol ? -1 : 0;
    for (auto f : v.faces) {
      if (side[f] == 0) continue;
      if (sgn == 0 || (side[f] != 2 && side[f] != sgn)) throw StraddlingFace("face '" + r.poly.face(f) + "' straddles the cutting plane");
      side[f] = sgn;
    }
  }
  return side;
}

/// Rotates the half away from the first non-circuit face by Rot and
/// re-gauges; combinatorics follow mutate_combinatorial.
inline RealizedPolyhedron mutate_geometric(const RealizedPolyhedron& r, const PrismaticCircuit& c) {
  const CuttingPlane plane = cutting_plane(r, c);
  const Mat4 rot = mutation_rotation(r, c, plane);
  const auto side = plane_sides(r, plane);
  SideAssignment sides;
  for (std::size_t f = 0; f < side.size(); ++f) {
    if (side[f] < 0) sides.upper.push_back(r.poly.face(f));
    if (side[f] > 0) sides.lower.push_back(r.poly.face(f));
  }
  RealizedPolyhedron out = r;
  out.poly = mutate_combinatorial(r.poly, c, sides);
  PrecisionGuard guard(r.digits + 20);
  for (std::size_t f = 0; f < side.size(); ++f)
    if (side[f] > 0) out.normals[f] = apply(rot, r.normals[f]);
  out.normals = detail::canonical_gauge(out.normals);
  out.residual = detail::max_residual(out.poly, out.normals);
  out.newton_history.clear();
  return out;
}

// ---------------------------------------------------------------------------
// Reflections as anti-Möbius maps

/// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  Complex a, b, c, d;

  Complex trace() const { return a + d; }
  Complex det() const { return a * d - b * c; }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 conj(const Mat2& m) { return {conj(m.a), conj(m.b), conj(m.c), conj(m.d)}; }

inline Mat2 identity2() { return {Complex(1), Complex(0), Complex(0), Complex(1)}; }

/// Reflection in the plane with unit normal v as z ↦ M·conj(z), det M = 1.
/// With w = (w1, w2, w3) the spatial part: the plane meets the sphere at
/// infinity (upper half-space model, ball point (0,0,−1) sent to ∞) in the
/// circle with matrix i·[[−B, −D], [A, conj(B)]], A = −(w3 + t),
/// B = w1 + i·w2, D = w3 − t.
inline Mat2 reflection_matrix(const Vec4& v) {
  const Complex A(Real(-(v[3] + v[0])));
  const Complex B(v[1], v[2]);
  const Complex D(Real(v[3] - v[0]));
  const Complex i(Real(0), Real(1));
  return {i * (-B), i * (-D), i * A, i * conj(B)};
}

inline std::vector<Mat2> to_moebius_generators(const RealizedPolyhedron& r) {
  PrecisionGuard guard(r.digits + 20);
  std::vector<Mat2> out;
  for (const auto& v : r.normals) out.push_back(reflection_matrix(v));
  return out;
}

/// Holomorphic matrix of an even-length reflection word r_{w0} r_{w1} ...:
/// M_{w0} · conj(M_{w1}) · M_{w2} · conj(M_{w3}) ...
inline Mat2 word_matrix(const std::vector<Mat2>& gens, const std::vector<std::size_t>& word) {
  Mat2 m = identity2();
  for (std::size_t k = 0; k < word.size(); ++k) m = m * (k % 2 == 0 ? gens[word[k]] : conj(gens[word[k]]));
  return m;
}

}  // namespace polymut
