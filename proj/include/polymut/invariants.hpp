#pragma once

// Commensurability invariants of the reflection group of a realized
// polyhedron: invariant trace field from sampled traces, integral traces from
// the Gram matrix, the quaternion algebra in the vertex-condition case, the
// arithmeticity flag and pairwise verdicts.

#include <polymut/algebraic.hpp>
#include <polymut/combinat.hpp>
#include <polymut/lorentz.hpp>
#include <polymut/multiprecision.hpp>
#include <polymut/polynomial.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymut {

/// A computation could not decide its answer (recognition failed, or a
/// criterion does not apply).
struct Indeterminate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The trace field kept growing up to the word-length cap.
struct Unstabilized : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Word = std::vector<std::size_t>;

/// `element` is an even-length reflection word for an element of Γ^(2)
/// (w·w, or u·u·w·w for product samples); `trace` is its trace.
struct TraceSample {
  Word element;
  Complex trace;
};

struct SamplingConfig {
  /// Words of each length beyond the exhaustive ones.
  std::size_t words_per_length = 48;
  /// Pairwise products u²·w² taken from the words of length <= 4.
  std::size_t products = 32;
  std::uint64_t seed = kDefaultSolverSeed;
};

namespace detail {

/// Smallest rotation of `w` or of its reversal. Rotating a word conjugates
/// the element and reversing inverts it, so the trace of the square only
/// depends on this representative.
inline Word canonical_necklace(const Word& w) {
  Word best = w;
  Word rev(w.rbegin(), w.rend());
  for (const Word* base : std::array<const Word*, 2>{&w, &rev}) {
    Word r = *base;
    for (std::size_t k = 0; k < r.size(); ++k) {
      std::rotate(r.begin(), r.begin() + 1, r.end());
      if (r < best) best = r;
    }
  }
  return best;
}

inline bool cyclically_reduced(const Word& w) {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] == w[(k + 1) % w.size()]) return false;
  return true;
}

/// Every cyclically reduced word of length `len` over `letters` letters, one
/// per rotation/reversal class.
inline std::vector<Word> all_necklaces(std::size_t letters, std::size_t len) {
  std::set<Word> out;
  Word w(len, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == len) {
      if (cyclically_reduced(w)) out.insert(canonical_necklace(w));
      return;
    }
    for (std::size_t a = 0; a < letters; ++a) {
      if (pos > 0 && w[pos - 1] == a) continue;
      w[pos] = a;
      rec(pos + 1);
    }
  };
  rec(0);
  return {out.begin(), out.end()};
}

/// Number of cyclically reduced words, (n-1)^L + (-1)^L (n-1).
inline double reduced_word_count(std::size_t letters, std::size_t len) {
  const double m = static_cast<double>(letters) - 1;
  return std::pow(m, static_cast<double>(len)) + (len % 2 == 0 ? m : -m);
}

/// Up to `budget` distinct necklace classes of length `len`: all of them when
/// there are few, otherwise a seeded sample.
inline std::vector<Word> sample_necklaces(std::size_t letters, std::size_t len, std::size_t budget,
                                          std::uint64_t seed) {
  if (letters < 2) return {};
  if (reduced_word_count(letters, len) <= 4096) {
    auto all = all_necklaces(letters, len);
    if (all.size() <= budget) return all;
    std::mt19937_64 rng(seed ^ (0x51ED270B27A4D3C5ULL * len));
    std::vector<Word> pick;
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates with raw 64-bit draws, so the subset does not
    // depend on the standard library's distributions.
    for (std::size_t k = 0; k < budget; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng() % (idx.size() - k));
      std::swap(idx[k], idx[j]);
      pick.push_back(all[idx[k]]);
    }
    std::sort(pick.begin(), pick.end());
    return pick;
  }
  std::mt19937_64 rng(seed ^ (0x51ED270B27A4D3C5ULL * len));
  std::set<Word> out;
  for (std::size_t attempt = 0; out.size() < budget && attempt < 64 * budget; ++attempt) {
    Word w(len);
    w[0] = static_cast<std::size_t>(rng() % letters);
    for (std::size_t k = 1; k < len; ++k) {
      const std::size_t step = 1 + static_cast<std::size_t>(rng() % (letters - 1));
      w[k] = (w[k - 1] + step) % letters;
    }
    if (!cyclically_reduced(w)) continue;
    out.insert(canonical_necklace(w));
  }
  return {out.begin(), out.end()};
}

/// Rounded decimal rendering used to drop numerically equal samples.
inline std::string fingerprint(const Complex& z) {
  PrecisionGuard guard(60);
  const Real re = at_working_precision(z.re);
  const Real im = at_working_precision(z.im);
  const Real eps = ten_pow(-30);
  return to_decimal(abs(re) < eps ? Real(0) : re, 30) + "|" + to_decimal(abs(im) < eps ? Real(0) : im, 30);
}

inline Word doubled(const Word& w) {
  Word out = w;
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

/// Samples whose words have length exactly `len` (length 2 is folded into
/// the first round together with the product samples).
inline std::vector<TraceSample> round_samples(const std::vector<Mat2>& gens, std::size_t len,
                                              const SamplingConfig& cfg) {
  const std::size_t F = gens.size();
  std::vector<Word> words;
  std::vector<Word> short_words;
  if (len == 4) {
    for (const auto& w : sample_necklaces(F, 2, static_cast<std::size_t>(-1), cfg.seed)) {
      words.push_back(w);
      short_words.push_back(w);
    }
  }
  for (const auto& w : sample_necklaces(F, len, cfg.words_per_length, cfg.seed)) {
    words.push_back(w);
    if (len == 4) short_words.push_back(w);
  }
  std::vector<TraceSample> out;
  for (const auto& w : words) {
    const Complex t = word_matrix(gens, w).trace();
    out.push_back({doubled(w), t * t - Complex(2)});
  }
  if (len == 4 && short_words.size() > 1) {
    std::mt19937_64 rng(cfg.seed ^ 0xC2B2AE3D27D4EB4FULL);
    for (std::size_t k = 0; k < cfg.products; ++k) {
      const auto i = static_cast<std::size_t>(rng() % short_words.size());
      auto j = static_cast<std::size_t>(rng() % (short_words.size() - 1));
      if (j >= i) ++j;
      Word e = doubled(short_words[i]);
      const Word w2 = doubled(short_words[j]);
      e.insert(e.end(), w2.begin(), w2.end());
      out.push_back({e, word_matrix(gens, e).trace()});
    }
  }
  return out;
}

}  // namespace detail

/// Traces of Γ^(2) elements: w² for sampled cyclically reduced words w of
/// even length up to `max_len` (all words of length 2), plus products u²·w²
/// of short words. Numerically equal traces are kept once.
inline std::vector<TraceSample> sample_traces(const RealizedPolyhedron& r, int max_len,
                                              const SamplingConfig& cfg = {}) {
  const auto gens = to_moebius_generators(r);
  PrecisionGuard guard(r.digits + 20);
  std::vector<TraceSample> out;
  std::set<std::string> seen;
  for (int len = 4; len <= std::max(4, max_len); len += 2) {
    for (auto& s : detail::round_samples(gens, static_cast<std::size_t>(len), cfg)) {
      if (seen.insert(detail::fingerprint(s.trace)).second) out.push_back(std::move(s));
    }
  }
  return out;
}

struct ItfConfig {
  RecognitionConfig recognition;
  JoinConfig join;
  SamplingConfig sampling;
  int max_len = 12;
  std::size_t primitive_attempts = 24;
};

struct ItfResult {
  /// Traces forming a Q-basis of the field; the first is the identity's
  /// trace 2.
  std::vector<TraceSample> basis;
  /// A primitive element with its minimal polynomial, when one of the basis
  /// traces (or a sum of two) could be recognized at full degree.
  std::optional<AlgebraicNumber> primitive;
  int rounds = 0;
  int stable_rounds = 0;
  int max_len_reached = 0;
  std::size_t samples = 0;
  /// Precision the basis values are carried at.
  unsigned digits = 0;

  int degree() const { return static_cast<int>(basis.size()); }
};

/// Q-span membership against the basis of `f`.
inline LinearSpan trace_field_span(const ItfResult& f, unsigned digits, int height_digits = 40) {
  std::vector<Complex> lo;
  std::vector<Complex> hi;
  for (const auto& b : f.basis) {
    lo.push_back(b.trace);
    hi.push_back(b.trace);
  }
  return LinearSpan(std::move(lo), std::move(hi), digits, height_digits);
}

namespace detail {

/// Tries basis traces, then sums of two, for an element whose minimal
/// polynomial has full degree.
inline std::optional<AlgebraicNumber> find_primitive(const std::vector<TraceSample>& basis,
                                                     const RecognitionConfig& base, std::size_t max_attempts) {
  const int n = static_cast<int>(basis.size());
  if (n <= 1) return make_algebraic(IntPoly{{Integer(0), Integer(1)}}, Complex(0));
  RecognitionConfig cfg = base;
  cfg.dmax = n;
  std::vector<Complex> candidates;
  for (std::size_t i = 1; i < basis.size(); ++i) candidates.push_back(basis[i].trace);
  for (std::size_t i = 1; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) candidates.push_back(basis[i].trace + basis[j].trace);
  std::size_t attempts = 0;
  for (const auto& c : candidates) {
    if (attempts++ >= max_attempts) break;
    try {
      IntPoly p = recognize_minpoly(constant_source(c), cfg);
      if (p.degree() == n) return make_algebraic(std::move(p), c);
    } catch (const NoRelation&) {
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Invariant trace field by sampling. The traces of Γ^(2) span the field
/// over Q, so the field is grown as the Q-span of sampled traces: rounds take
/// words of length 4, 6, ... and every trace outside the current span joins
/// the basis. The result is returned once two consecutive rounds leave the
/// span unchanged. Realizations below twice the recognition precision are
/// refined first.
inline ItfResult itf(const RealizedPolyhedron& input, const ItfConfig& cfg = {}) {
  const unsigned digits = cfg.recognition.digits;
  const RealizedPolyhedron r = input.digits >= 2 * digits + 10 ? input : refine(input, 2 * digits + 20);
  const auto gens = to_moebius_generators(r);
  PrecisionGuard guard(r.digits + 20);

  ItfResult result;
  result.digits = r.digits;
  result.basis.push_back({{}, Complex(2)});
  auto span = std::make_optional<LinearSpan>(trace_field_span(result, digits, cfg.recognition.height_digits));
  std::set<std::string> seen;
  for (int len = 4; len <= cfg.max_len; len += 2) {
    bool changed = false;
    for (auto& s : detail::round_samples(gens, static_cast<std::size_t>(len), cfg.sampling)) {
      if (!seen.insert(detail::fingerprint(s.trace)).second) continue;
      ++result.samples;
      if (span->coordinates(constant_source(s.trace))) continue;
      if (result.degree() >= cfg.recognition.dmax)
        throw Indeterminate("itf: span exceeds degree " + std::to_string(cfg.recognition.dmax));
      result.basis.push_back(std::move(s));
      span.emplace(trace_field_span(result, digits, cfg.recognition.height_digits));
      changed = true;
    }
    ++result.rounds;
    result.max_len_reached = len;
    result.stable_rounds = changed ? 0 : result.stable_rounds + 1;
    if (result.stable_rounds >= 2) {
      result.primitive = detail::find_primitive(result.basis, cfg.recognition, cfg.primitive_attempts);
      return result;
    }
  }
  throw Unstabilized("itf: field still changing at word length " + std::to_string(cfg.max_len));
}

/// Whether `x` lies in the field.
inline bool itf_contains(const ItfResult& f, const ValueSource& x, unsigned digits) {
  return trace_field_span(f, digits).coordinates(x).has_value();
}

/// Mutual containment of two trace fields.
inline bool same_field(const ItfResult& a, const ItfResult& b, unsigned digits) {
  if (a.degree() != b.degree()) return false;
  const LinearSpan sa = trace_field_span(a, digits);
  const LinearSpan sb = trace_field_span(b, digits);
  for (const auto& t : b.basis)
    if (!sa.coordinates(constant_source(t.trace))) return false;
  for (const auto& t : a.basis)
    if (!sb.coordinates(constant_source(t.trace))) return false;
  return true;
}

/// One recognized off-diagonal Gram entry.
struct GramCertificate {
  std::size_t i = 0;
  std::size_t j = 0;
  IntPoly minpoly;
};

struct IntegralTraceResult {
  bool integral = true;
  std::vector<GramCertificate> certificates;
  /// The entries whose minimal polynomial is not monic.
  std::vector<GramCertificate> witnesses;
};

/// Every trace is an algebraic integer iff every Gram entry is one.
/// Numerically equal entries are recognized once.
inline IntegralTraceResult has_integral_traces(const GramMatrix& g, unsigned digits, int dmax = 32) {
  IntegralTraceResult out;
  std::map<std::string, IntPoly> known;
  RecognitionConfig cfg;
  cfg.digits = digits;
  cfg.dmax = dmax;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const Complex x(g[i][j]);
      const std::string key = detail::fingerprint(x);
      auto it = known.find(key);
      if (it == known.end()) {
        try {
          it = known.emplace(key, recognize_minpoly(constant_source(x), cfg)).first;
        } catch (const NoRelation& e) {
          throw Indeterminate("has_integral_traces: Gram entry (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") not recognized: " + e.what());
        }
      }
      GramCertificate c{i, j, it->second};
      if (!is_algebraic_integer(c.minpoly)) {
        out.integral = false;
        out.witnesses.push_back(c);
      }
      out.certificates.push_back(std::move(c));
    }
  return out;
}

/// Hilbert symbol (a, b) over the trace field, with the vertex that forces it.
struct HilbertSymbol {
  int a = -1;
  int b = -1;
  Triple witness{};
};

/// (−1, −1) when some vertex has two edges with angles π/n, π/m, n, m >= 3;
/// otherwise nothing is claimed.
inline std::optional<HilbertSymbol> iqa_symbol(const AngledPolyhedron& p) {
  for (const auto& v : p.vertices()) {
    const int n01 = p.angle(v[0], v[1]);
    const int n02 = p.angle(v[0], v[2]);
    const int n12 = p.angle(v[1], v[2]);
    const int big = (n01 >= 3) + (n02 >= 3) + (n12 >= 3);
    if (big >= 2) return HilbertSymbol{-1, -1, v};
  }
  return std::nullopt;
}

inline std::optional<HilbertSymbol> iqa_symbol(const AngledPolyhedron& p, const ItfResult&) {
  return iqa_symbol(p);
}

struct Provenance {
  unsigned solve_digits = 0;
  unsigned digits = 0;
  int max_len = 0;
  std::size_t samples = 0;
  int rounds = 0;
  int stable_rounds = 0;
  std::uint64_t seed = 0;
};

struct InvariantReport {
  std::string name;
  ItfResult itf;
  IntegralTraceResult traces;
  std::optional<HilbertSymbol> iqa;
  /// Empty when the criterion does not apply.
  std::optional<bool> arithmetic;
  Provenance provenance;

  /// Minimal polynomial of the primitive element, if one was found.
  std::optional<IntPoly> itf_poly() const {
    if (!itf.primitive) return std::nullopt;
    return itf.primitive->minpoly;
  }
  bool integral_traces() const { return traces.integral; }
};

/// Integral traces and exactly one complex place. Only decided when the
/// quaternion algebra is (−1, −1), which is ramified at every real place.
inline bool is_arithmetic(const IntPoly& itf_poly, bool integral, const std::optional<HilbertSymbol>& iqa) {
  if (!iqa) throw Indeterminate("is_arithmetic: quaternion algebra not determined");
  if (!integral) return false;
  return count_real_roots(itf_poly) == itf_poly.degree() - 2;
}

inline bool is_arithmetic(const InvariantReport& r) {
  const auto poly = r.itf_poly();
  if (!poly) throw Indeterminate("is_arithmetic: no primitive element for the trace field");
  return is_arithmetic(*poly, r.integral_traces(), r.iqa);
}

struct InvariantConfig {
  ItfConfig itf;
  /// Solve precision before refinement to recognition precision.
  unsigned solve_digits = 50;
};

/// realize → refine → gram → invariants.
inline InvariantReport compute_invariants(const std::string& name, const RealizedPolyhedron& realized,
                                          const InvariantConfig& cfg = {}) {
  const unsigned digits = cfg.itf.recognition.digits;
  const RealizedPolyhedron r =
      realized.digits >= 2 * digits + 10 ? realized : refine(realized, 2 * digits + 20);
  InvariantReport rep;
  rep.name = name;
  const ItfResult f = itf(r, cfg.itf);
  rep.itf = f;
  rep.traces = has_integral_traces(gram(r), digits, cfg.itf.recognition.dmax);
  rep.iqa = iqa_symbol(r.poly);
  if (rep.iqa && rep.itf_poly()) rep.arithmetic = is_arithmetic(rep);
  rep.provenance = {realized.digits, digits, cfg.itf.max_len, f.samples, f.rounds, f.stable_rounds, r.seed};
  return rep;
}

inline InvariantReport compute_invariants(const std::string& name, const AngledPolyhedron& p,
                                          const InvariantConfig& cfg = {}) {
  RealizeConfig rc;
  rc.digits = cfg.solve_digits;
  rc.seed = cfg.itf.sampling.seed;
  InvariantReport rep = compute_invariants(name, realize(p, rc), cfg);
  rep.provenance.solve_digits = cfg.solve_digits;
  return rep;
}

struct Verdict {
  enum class Kind { Distinguished, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;

  bool distinguished() const { return kind == Kind::Distinguished; }
};

/// Integral traces and the trace field are commensurability invariants; a
/// difference in either separates the pair. Agreement decides nothing.
inline Verdict commensurability_verdict(const InvariantReport& a, const InvariantReport& b, unsigned digits = 250) {
  if (a.integral_traces() != b.integral_traces()) return {Verdict::Kind::Distinguished, "integral-trace mismatch"};
  if (!same_field(a.itf, b.itf, digits)) return {Verdict::Kind::Distinguished, "invariant trace fields differ"};
  return {Verdict::Kind::Unknown, ""};
}

}  // namespace polymut
