#pragma once

// Exact algebraic data recovered from high-precision numerics: integer
// relations, minimal polynomials, algebraic-integer tests, number-field joins
// and field membership.

#include <polymut/lll.hpp>
#include <polymut/multiprecision.hpp>
#include <polymut/polynomial.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polymut {

/// Recognition found no relation that survives verification.
struct NoRelation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// field_join ran out of primitive-element candidates.
struct JoinFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Produces a value to (at least) the requested number of decimal digits.
/// Recognition asks for `digits` to find a relation and `2 * digits` to
/// confirm it.
using ValueSource = std::function<Complex(unsigned digits)>;

/// A source that always hands back the same stored value (whatever precision
/// it was computed at).
inline ValueSource constant_source(Complex value) {
  return [v = std::move(value)](unsigned) { return v; };
}

struct RecognitionConfig {
  unsigned digits = 250;
  int dmax = 32;
  /// Largest coefficient magnitude accepted in a relation, as a power of ten.
  int height_digits = 40;
};

/// Small integer vector c with Σ c_i v_i ≈ 0, using the values scaled by
/// 10^digits (real and imaginary parts as separate lattice columns). Returns
/// nullopt if the reduced lattice's first vector is not a plausible relation.
inline std::optional<IntVector> find_integer_relation(const std::vector<Complex>& values, unsigned digits,
                                                      int height_digits = 40) {
  const std::size_t n = values.size();
  if (n < 2) return std::nullopt;
  PrecisionGuard guard(digits + 30);
  const Real scale = ten_pow(static_cast<long>(digits));
  const Real tiny = ten_pow(-static_cast<long>(digits));
  bool complex = false;
  for (const auto& v : values) complex = complex || abs(v.im) > tiny * (Real(1) + abs(v.re));
  IntMatrix basis(n, IntVector(n + (complex ? 2 : 1), 0));
  for (std::size_t i = 0; i < n; ++i) {
    basis[i][i] = 1;
    basis[i][n] = round_to_integer(at_working_precision(values[i].re) * scale);
    if (complex) basis[i][n + 1] = round_to_integer(at_working_precision(values[i].im) * scale);
  }
  const IntMatrix reduced = lll_reduce(std::move(basis));
  IntVector rel(reduced[0].begin(), reduced[0].begin() + static_cast<long>(n));
  const Integer cap = pow(Integer(10), static_cast<unsigned>(height_digits));
  bool nonzero = false;
  for (const auto& c : rel) {
    if (abs(c) > cap) return std::nullopt;
    nonzero = nonzero || c != 0;
  }
  if (!nonzero) return std::nullopt;
  return rel;
}

/// |Σ c_i v_i| / Σ |c_i| max(1, |v_i|); zero when every term vanishes.
inline Real relation_residual(const IntVector& c, const std::vector<Complex>& values) {
  Complex sum(0);
  Real scale(0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    sum += scale_int(values[i], c[i]);
    scale += abs(to_real(c[i])) * std::max(Real(1), Real(abs(values[i])));
  }
  if (scale == 0) return Real(0);
  return abs(sum) / scale;
}

namespace detail {

inline std::vector<Complex> powers(const Complex& x, int d) {
  std::vector<Complex> out;
  Complex p(1);
  for (int i = 0; i <= d; ++i) {
    out.push_back(p);
    p *= x;
  }
  return out;
}

/// |p(x)| against Σ |c_i| max(1, |x|)^i, so values near zero are judged on
/// an absolute scale.
inline Real poly_relative_residual(const IntPoly& p, const Complex& x) {
  const Real s = p.eval_abs(std::max(Real(1), Real(abs(x))));
  if (s == 0) return Real(0);
  return abs(p.eval(x)) / s;
}

}  // namespace detail

/// Minimal polynomial of `source`'s value: the lowest degree d in
/// [dmin, dmax] (only multiples of `dstep`) whose integer relation on
/// 1, x, ..., x^d has relative residual < 10^(-0.6·digits) and still holds
/// when x is recomputed at 2·digits.
inline IntPoly recognize_minpoly(const ValueSource& source, const RecognitionConfig& cfg, int dmin = 1,
                                 int dstep = 1) {
  if (cfg.dmax > 32) throw std::invalid_argument("recognize_minpoly: dmax must be <= 32");
  const Complex x = source(cfg.digits);
  std::optional<Complex> x2;
  PrecisionGuard guard(cfg.digits + 30);
  const Real loose = ten_pow(-static_cast<long>(0.6 * cfg.digits));
  const Real strict = ten_pow(-static_cast<long>(1.2 * cfg.digits));
  const Complex xw = at_working_precision(x);
  int start = std::max(1, dmin);
  if (start % dstep != 0) start += dstep - start % dstep;
  for (int d = start; d <= cfg.dmax; d += dstep) {
    const auto rel = find_integer_relation(detail::powers(xw, d), cfg.digits, cfg.height_digits);
    if (!rel || (*rel)[static_cast<std::size_t>(d)] == 0) continue;
    const IntPoly p = IntPoly::primitive(*rel);
    if (p.degree() != d) continue;
    if (detail::poly_relative_residual(p, xw) >= loose) continue;
    if (!x2) x2 = source(2 * cfg.digits);
    PrecisionGuard high(2 * cfg.digits + 30);
    if (detail::poly_relative_residual(p, at_working_precision(*x2)) >= strict) continue;
    return p;
  }
  throw NoRelation("no integer relation of degree <= " + std::to_string(cfg.dmax) + " at " +
                   std::to_string(cfg.digits) + " digits");
}

inline IntPoly recognize_minpoly(const Complex& x, int dmax, unsigned digits) {
  RecognitionConfig cfg;
  cfg.dmax = dmax;
  cfg.digits = digits;
  return recognize_minpoly(constant_source(x), cfg);
}

/// A minimal polynomial is monic exactly when its root is an algebraic integer.
inline bool is_algebraic_integer(const IntPoly& p) { return p.leading() == 1; }

/// A root of `minpoly` pinned by an approximation and an isolation radius that
/// separates it from the other roots.
struct AlgebraicNumber {
  IntPoly minpoly;
  Complex approx;
  Real isolation_radius;

  int degree() const { return minpoly.degree(); }

  /// The root re-polished by Newton iteration at `digits` digits.
  Complex value(unsigned digits) const {
    PrecisionGuard guard(digits + 20);
    return newton_polish(minpoly, approx);
  }

  ValueSource source() const {
    return [self = *this](unsigned digits) { return self.value(digits); };
  }
};

/// Attaches an isolation radius (half the distance to the nearest other root).
inline AlgebraicNumber make_algebraic(IntPoly minpoly, Complex approx) {
  Real radius;
  {
    PrecisionGuard guard(60);
    const Complex a = at_working_precision(approx);
    const auto roots = polynomial_roots(minpoly);
    Real nearest(-1);
    for (const auto& r : roots) {
      const Real dist = abs(r - a);
      if (dist < ten_pow(-40)) continue;
      if (nearest < 0 || dist < nearest) nearest = dist;
    }
    radius = nearest < 0 ? Real(1) : Real(nearest / 2);
  }
  return AlgebraicNumber{std::move(minpoly), std::move(approx), std::move(radius)};
}

/// Recognizes the value of `source` and packages it as an AlgebraicNumber.
inline AlgebraicNumber recognize(const ValueSource& source, const RecognitionConfig& cfg) {
  IntPoly p = recognize_minpoly(source, cfg);
  return make_algebraic(std::move(p), source(2 * cfg.digits));
}

/// Q(θ) with the original generators written in the power basis of θ.
struct NumberField {
  AlgebraicNumber theta;
  /// θ = Σ combination[i] · generators[i].
  std::vector<int> combination;
  std::vector<AlgebraicNumber> generators;
  /// generator_coords[i][k] is the coefficient of θ^k in generators[i].
  std::vector<std::vector<Rational>> generator_coords;

  int degree() const { return theta.degree(); }
};

/// The field of rationals, presented by θ = 0.
inline NumberField rational_field() {
  return NumberField{make_algebraic(IntPoly{{Integer(0), Integer(1)}}, Complex(0)), {}, {}, {}};
}

/// Relation lattice of fixed values x_0..x_{n-1} at `digits`, LLL-reduced
/// once. Relations that also involve one further value y then come out of a
/// short incremental reduction with y's row appended.
class RelationLattice {
 public:
  RelationLattice(const std::vector<Complex>& values, unsigned digits) : n_(values.size()), digits_(digits) {
    PrecisionGuard guard(digits + 30);
    scale_ = ten_pow(static_cast<long>(digits));
    IntMatrix basis;
    for (std::size_t i = 0; i < n_; ++i) basis.push_back(row(i, values[i]));
    reduced_ = lll_reduce(std::move(basis));
  }

  std::size_t size() const { return n_; }

  /// Coefficients (c_0, ..., c_{n-1}, c_y) of the shortest relation found,
  /// or nullopt when no candidate stays under the height cap.
  std::optional<IntVector> relation_with(const Complex& y, int height_digits = 40) const {
    PrecisionGuard guard(digits_ + 30);
    IntMatrix basis = reduced_;
    basis.push_back(row(n_, y));
    const IntMatrix reduced = lll_reduce(std::move(basis));
    IntVector rel(reduced[0].begin(), reduced[0].begin() + static_cast<long>(n_ + 1));
    const Integer cap = pow(Integer(10), static_cast<unsigned>(height_digits));
    bool nonzero = false;
    for (const auto& c : rel) {
      if (abs(c) > cap) return std::nullopt;
      nonzero = nonzero || c != 0;
    }
    if (!nonzero) return std::nullopt;
    return rel;
  }

 private:
  IntVector row(std::size_t i, const Complex& v) const {
    IntVector r(n_ + 3, 0);
    r[i] = 1;
    r[n_ + 1] = round_to_integer(at_working_precision(v.re) * scale_);
    r[n_ + 2] = round_to_integer(at_working_precision(v.im) * scale_);
    return r;
  }

  std::size_t n_;
  unsigned digits_;
  Real scale_;
  IntMatrix reduced_;
};

/// Membership in the Q-span of fixed values b_0..b_{n-1}, known at `digits`
/// and at twice that. The lattice of the b_i is reduced once, so repeated
/// tests only pay for the new value.
class LinearSpan {
 public:
  LinearSpan(std::vector<Complex> lo, std::vector<Complex> hi, unsigned digits, int height_digits = 40)
      : digits_(digits), height_digits_(height_digits), lo_(std::move(lo)), hi_(std::move(hi)),
        lattice_(lo_, digits) {}

  std::size_t dimension() const { return lo_.size(); }

  /// Rational coordinates of x against the b_i, if an integer relation
  /// exists at `digits` and re-verifies at twice that precision.
  std::optional<std::vector<Rational>> coordinates(const ValueSource& x) const {
    PrecisionGuard guard(digits_ + 30);
    std::vector<Complex> vals = lo_;
    vals.push_back(at_working_precision(x(digits_)));
    const auto rel = lattice_.relation_with(vals.back(), height_digits_);
    if (!rel || rel->back() == 0) return std::nullopt;
    if (relation_residual(*rel, vals) >= ten_pow(-static_cast<long>(0.6 * digits_))) return std::nullopt;
    {
      PrecisionGuard high(2 * digits_ + 30);
      std::vector<Complex> hi = hi_;
      hi.push_back(x(2 * digits_));
      for (auto& v : hi) v = at_working_precision(v);
      if (relation_residual(*rel, hi) >= ten_pow(-static_cast<long>(1.2 * digits_))) return std::nullopt;
    }
    std::vector<Rational> coords;
    const Integer& last = rel->back();
    for (std::size_t k = 0; k + 1 < rel->size(); ++k) coords.push_back(Rational(-(*rel)[k], last));
    return coords;
  }

 private:
  unsigned digits_;
  int height_digits_;
  std::vector<Complex> lo_;
  std::vector<Complex> hi_;
  RelationLattice lattice_;
};

/// Membership in Q(θ) through the power basis 1, θ, ..., θ^(deg-1).
class FieldMembership : public LinearSpan {
 public:
  FieldMembership(const NumberField& f, unsigned digits, int height_digits = 40)
      : LinearSpan(theta_powers(f, digits), theta_powers(f, 2 * digits), digits, height_digits) {}

 private:
  static std::vector<Complex> theta_powers(const NumberField& f, unsigned digits) {
    PrecisionGuard guard(digits + 30);
    return detail::powers(at_working_precision(f.theta.value(digits)), f.degree() - 1);
  }
};

/// Coordinates of x in the power basis 1, θ, ..., θ^(deg-1), if an integer
/// relation exists at `digits` and re-verifies at twice that precision.
inline std::optional<std::vector<Rational>> contains(const NumberField& f, const ValueSource& x,
                                                     unsigned digits, int height_digits = 40) {
  return FieldMembership(f, digits, height_digits).coordinates(x);
}

inline std::optional<std::vector<Rational>> contains(const NumberField& f, const AlgebraicNumber& x,
                                                     unsigned digits) {
  return contains(f, x.source(), digits);
}

/// Evaluates power-basis coordinates at θ.
inline Complex evaluate_coords(const NumberField& f, const std::vector<Rational>& coords, unsigned digits) {
  PrecisionGuard guard(digits + 20);
  const Complex t = f.theta.value(digits);
  Complex acc(0);
  for (std::size_t k = coords.size(); k-- > 0;) acc = acc * t + Complex(to_real(coords[k]));
  return acc;
}

namespace detail {

/// Deterministic candidate multipliers 1, -1, 2, -2, ..., bound, -bound.
inline std::vector<int> signed_range(int bound) {
  std::vector<int> out;
  for (int k = 1; k <= bound; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

/// Candidate combination vectors with leading entry 1 and every other entry
/// in ±1..±bound, ordered by L1 norm then lexicographically over
/// (1, -1, 2, -2, ...).
inline std::vector<std::vector<int>> combination_candidates(std::size_t n, int bound, std::size_t limit) {
  std::vector<std::vector<int>> out;
  if (n == 0) return out;
  const auto alphabet = signed_range(bound);
  for (int total = static_cast<int>(n); out.size() < limit && total <= static_cast<int>(n) * bound; ++total) {
    std::vector<std::size_t> idx(n - 1, 0);
    while (true) {
      int l1 = 1;
      for (auto i : idx) l1 += std::abs(alphabet[i]);
      if (l1 == total) {
        std::vector<int> c{1};
        for (auto i : idx) c.push_back(alphabet[i]);
        out.push_back(std::move(c));
        if (out.size() >= limit) break;
      }
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == alphabet.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
  return out;
}

}  // namespace detail

struct JoinConfig {
  RecognitionConfig recognition;
  int coefficient_bound = 8;
  int max_attempts = 20;
};

/// Compositum of the fields generated by `gens`, presented by a primitive
/// element θ = Σ c_i g_i with small integer c_i.
inline NumberField field_join(const std::vector<AlgebraicNumber>& gens, const JoinConfig& cfg = {}) {
  std::vector<AlgebraicNumber> useful;
  for (const auto& g : gens)
    if (g.degree() > 1) useful.push_back(g);
  NumberField result = rational_field();
  result.generators = gens;
  if (useful.empty()) {
    for (const auto& g : gens) result.generator_coords.push_back({Rational(-g.minpoly.coeffs[0], g.minpoly.coeffs[1])});
    return result;
  }
  long product = 1;
  int lcm_deg = 1;
  for (const auto& g : useful) {
    product = std::min<long>(32, product * g.degree());
    lcm_deg = std::lcm(lcm_deg, g.degree());
  }
  const unsigned digits = cfg.recognition.digits;
  const auto candidates = detail::combination_candidates(useful.size(), cfg.coefficient_bound,
                                                         static_cast<std::size_t>(cfg.max_attempts));
  for (const auto& comb : candidates) {
    ValueSource theta_source = [&useful, comb](unsigned prec) {
      PrecisionGuard guard(prec + 20);
      Complex acc(0);
      for (std::size_t i = 0; i < comb.size(); ++i) acc += scale(useful[i].value(prec), Real(comb[i]));
      return acc;
    };
    RecognitionConfig rc = cfg.recognition;
    rc.dmax = static_cast<int>(product);
    IntPoly p;
    try {
      p = recognize_minpoly(theta_source, rc, lcm_deg, lcm_deg);
    } catch (const NoRelation&) {
      continue;
    }
    NumberField f;
    f.theta = make_algebraic(std::move(p), theta_source(2 * digits));
    bool ok = true;
    std::vector<std::vector<Rational>> coords;
    for (const auto& g : gens) {
      auto c = contains(f, g.source(), digits, cfg.recognition.height_digits);
      if (!c) {
        ok = false;
        break;
      }
      coords.push_back(std::move(*c));
    }
    if (!ok) continue;
    // Map the combination back onto the caller's generator order.
    std::vector<int> full(gens.size(), 0);
    for (std::size_t i = 0, u = 0; i < gens.size(); ++i)
      if (gens[i].degree() > 1) full[i] = comb[u++];
    f.combination = std::move(full);
    f.generators = gens;
    f.generator_coords = std::move(coords);
    return f;
  }
  throw JoinFailure("field_join: no primitive element found within the retry budget");
}

}  // namespace polymut
