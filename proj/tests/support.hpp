#pragma once

#include <polymut/combinat.hpp>
#include <polymut/lorentz.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace testsupport {

using polymut::AngledPolyhedron;

/// Angle-preserving face bijection a -> b by backtracking, if one exists.
inline std::optional<std::vector<std::size_t>> isomorphism(const AngledPolyhedron& a, const AngledPolyhedron& b) {
  const std::size_t n = a.num_faces();
  if (n != b.num_faces() || a.edges().size() != b.edges().size()) return std::nullopt;
  std::vector<std::size_t> map(n, n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || a.neighbors(i).size() != b.neighbors(j).size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) ok = a.angle(i, k) == b.angle(j, map[k]);
      if (!ok) continue;
      map[i] = j;
      used[j] = true;
      if (extend(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return map;
}

/// Largest |G_a(i,j) - G_b(m(i),m(j))| for a face bijection m.
inline polymut::Real gram_distance(const polymut::GramMatrix& ga, const polymut::GramMatrix& gb,
                                   const std::vector<std::size_t>& m) {
  polymut::Real d(0);
  for (std::size_t i = 0; i < ga.size(); ++i)
    for (std::size_t j = 0; j < ga.size(); ++j) d = max(d, polymut::Real(abs(ga[i][j] - gb[m[i]][m[j]])));
  return d;
}

/// Smallest Gram distance over all combinatorial isomorphisms a -> b.
inline std::optional<polymut::Real> congruence_defect(const polymut::RealizedPolyhedron& a,
                                                      const polymut::RealizedPolyhedron& b) {
  const std::size_t n = a.poly.num_faces();
  if (n != b.poly.num_faces()) return std::nullopt;
  const auto ga = polymut::gram(a);
  const auto gb = polymut::gram(b);
  std::optional<polymut::Real> best;
  std::vector<std::size_t> map(n, n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == n) {
      const polymut::Real d = gram_distance(ga, gb, map);
      if (!best || d < *best) best = d;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) ok = a.poly.angle(i, k) == b.poly.angle(j, map[k]);
      if (!ok) continue;
      map[i] = j;
      used[j] = true;
      extend(i + 1);
      used[j] = false;
    }
  };
  extend(0);
  return best;
}

}  // namespace testsupport
