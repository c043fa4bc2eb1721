#pragma once

// Integer polynomials: normalization, evaluation, exact real-root counting and
// numerical root finding at arbitrary precision.

#include <polymut/multiprecision.hpp>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymut {

/// Integer polynomial, coefficients in ascending degree order. Values built
/// through `IntPoly::primitive` are trimmed, have content 1 and a positive
/// leading coefficient.
struct IntPoly {
  std::vector<Integer> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const Integer& leading() const { return coeffs.back(); }

  bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }

  static IntPoly primitive(std::vector<Integer> c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("IntPoly: zero polynomial");
    Integer g = 0;
    for (const auto& x : c) g = gcd(g, abs(x));
    const bool flip = c.back() < 0;
    for (auto& x : c) {
      x /= g;
      if (flip) x = -x;
    }
    return IntPoly{std::move(c)};
  }

  /// From descending coefficients, the order polynomials are usually written in.
  static IntPoly from_descending(const std::vector<long long>& desc) {
    std::vector<Integer> c;
    for (auto it = desc.rbegin(); it != desc.rend(); ++it) c.emplace_back(*it);
    return primitive(std::move(c));
  }

  Complex eval(const Complex& x) const {
    Complex acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + Complex(to_real(coeffs[i]));
    return acc;
  }

  Complex eval_derivative(const Complex& x) const {
    Complex acc(0);
    for (std::size_t i = coeffs.size(); i-- > 1;) {
      acc = acc * x + Complex(to_real(Integer(coeffs[i] * static_cast<long>(i))));
    }
    return acc;
  }

  /// Σ |c_i| |x|^i, the scale against which residuals are judged.
  Real eval_abs(const Real& ax) const {
    Real acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * ax + to_real(Integer(abs(coeffs[i])));
    return acc;
  }

  /// Human-readable form, descending: "x^4 - 2*x^3 - x^2 + 2*x - 19".
  std::string to_string() const {
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const Integer& c = coeffs[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      Integer mag = abs(c);
      if (first) {
        if (c < 0) out << "-";
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool unit = mag == 1 && i > 0;
      if (!unit) out << mag;
      if (i > 0) {
        if (!unit) out << "*";
        out << "x";
        if (i > 1) out << "^" << i;
      }
    }
    return out.str();
  }
};

namespace detail {

using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly poly_rem(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline int sign_at_infinity(const RatPoly& p, bool positive) {
  if (p.empty()) return 0;
  int s = p.back() > 0 ? 1 : -1;
  if (!positive && (p.size() - 1) % 2 == 1) s = -s;
  return s;
}

}  // namespace detail

/// Number of distinct real roots, by Sturm sequence in exact arithmetic.
inline int count_real_roots(const IntPoly& p) {
  detail::RatPoly a(p.coeffs.begin(), p.coeffs.end());
  detail::RatPoly b;
  for (std::size_t i = 1; i < a.size(); ++i) b.push_back(a[i] * static_cast<long>(i));
  std::vector<detail::RatPoly> seq{a, b};
  while (!seq.back().empty() && seq.back().size() > 1) {
    detail::RatPoly r = detail::poly_rem(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& x : r) x = -x;
    seq.push_back(std::move(r));
  }
  auto variations = [&](bool positive) {
    int count = 0;
    int last = 0;
    for (const auto& s : seq) {
      const int v = detail::sign_at_infinity(s, positive);
      if (v == 0) continue;
      if (last != 0 && v != last) ++count;
      last = v;
    }
    return count;
  };
  return variations(false) - variations(true);
}

/// Newton refinement of an approximate simple root at the current precision.
inline Complex newton_polish(const IntPoly& p, Complex z, int max_iter = 200) {
  const Real tol = ten_pow(-static_cast<long>(Real::default_precision()) + 5);
  z = at_working_precision(z);
  for (int it = 0; it < max_iter; ++it) {
    const Complex d = p.eval_derivative(z);
    if (norm(d) == 0) break;
    const Complex step = p.eval(z) / d;
    z -= step;
    if (abs(step) <= tol * (Real(1) + abs(z))) {
      z -= p.eval(z) / p.eval_derivative(z);
      break;
    }
  }
  return z;
}

/// All complex roots (Aberth-Ehrlich iteration) at the current precision.
/// Roots of a squarefree polynomial converge to full precision.
inline std::vector<Complex> polynomial_roots(const IntPoly& p) {
  const int n = p.degree();
  std::vector<Complex> roots;
  if (n < 1) return roots;
  // Starting points on a circle of the Cauchy-bound radius, slightly rotated.
  Real bound(0);
  for (int i = 0; i < n; ++i)
    bound = std::max(bound, Real(abs(to_real(p.coeffs[static_cast<std::size_t>(i)]) / to_real(p.leading()))));
  bound = Real(1) + bound;
  const Real two_pi = 2 * pi();
  for (int k = 0; k < n; ++k) {
    const Real ang = two_pi * k / n + Real(0.4);
    roots.emplace_back(bound * cos(ang) * Real(0.9), bound * sin(ang) * Real(0.9));
  }
  const Real tol = ten_pow(-static_cast<long>(Real::default_precision()) + 8);
  for (int it = 0; it < 2000; ++it) {
    Real worst(0);
    for (int k = 0; k < n; ++k) {
      const Complex ratio = p.eval(roots[k]) / p.eval_derivative(roots[k]);
      Complex sum(0);
      for (int j = 0; j < n; ++j)
        if (j != k) sum += Complex(1) / (roots[k] - roots[j]);
      const Complex step = ratio / (Complex(1) - ratio * sum);
      roots[k] -= step;
      worst = std::max(worst, Real(abs(step) / (Real(1) + abs(roots[k]))));
    }
    if (worst < tol) break;
  }
  return roots;
}

}  // namespace polymut
