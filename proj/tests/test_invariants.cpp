#include <polymut/corpus.hpp>
#include <polymut/invariants.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace polymut;
using namespace polymut::detail;

namespace {

const InvariantReport& report(const std::string& name) {
  static std::map<std::string, InvariantReport> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, compute_invariants(name, build_polyhedron(name))).first;
  return it->second;
}

ValueSource table_source(const std::string& pair) {
  const CorpusEntry e = *find_corpus_entry(pair);
  return [row = *e.expected](unsigned digits) {
    PrecisionGuard g(digits + 20);
    return table_root(row, digits);
  };
}

std::size_t brute_necklaces(std::size_t letters, std::size_t len) {
  std::set<Word> classes;
  Word w(len, 0);
  std::size_t total = 1;
  for (std::size_t k = 0; k < len; ++k) total *= letters;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& x : w) {
      x = c % letters;
      c /= letters;
    }
    bool ok = true;
    for (std::size_t k = 0; k < len; ++k) ok = ok && w[k] != w[(k + 1) % len];
    if (!ok) continue;
    Word best = w;
    for (int pass = 0; pass < 2; ++pass) {
      Word r = pass ? Word(w.rbegin(), w.rend()) : w;
      for (std::size_t k = 0; k < len; ++k) {
        std::rotate(r.begin(), r.begin() + 1, r.end());
        best = std::min(best, r);
      }
    }
    classes.insert(best);
  }
  return classes.size();
}

AngledPolyhedron cube(int lateral) {
  AngledPolyhedron p;
  for (const char* f : {"top", "bottom", "n", "e", "s", "w"}) p.add_face(f);
  const char* ring[] = {"n", "e", "s", "w"};
  for (int k = 0; k < 4; ++k) {
    p.add_edge(ring[k], ring[(k + 1) % 4], lateral);
    p.add_edge("top", ring[k], 2);
    p.add_edge("bottom", ring[k], 2);
  }
  return p;
}

}  // namespace

TEST(Words, NecklaceCountsMatchBruteForce) {
  for (std::size_t letters : {2u, 3u, 4u, 5u})
    for (std::size_t len = 2; len <= 6; ++len)
      EXPECT_EQ(all_necklaces(letters, len).size(), brute_necklaces(letters, len)) << letters << "/" << len;
}

TEST(Words, CanonicalFormIsInvariant) {
  const Word w{0, 2, 1, 3, 1, 2};
  Word r = w;
  std::rotate(r.begin(), r.begin() + 2, r.end());
  EXPECT_EQ(canonical_necklace(r), canonical_necklace(w));
  EXPECT_EQ(canonical_necklace(Word(w.rbegin(), w.rend())), canonical_necklace(w));
  EXPECT_TRUE(cyclically_reduced(w));
  EXPECT_FALSE(cyclically_reduced(Word{0, 1, 2, 0}));
}

TEST(Words, ReducedWordCount) {
  for (std::size_t letters : {3u, 4u})
    for (std::size_t len = 2; len <= 6; ++len) {
      std::size_t n = 0, total = 1;
      for (std::size_t k = 0; k < len; ++k) total *= letters;
      for (std::size_t code = 0; code < total; ++code) {
        Word w(len);
        std::size_t c = code;
        for (auto& x : w) {
          x = c % letters;
          c /= letters;
        }
        n += cyclically_reduced(w);
      }
      EXPECT_EQ(reduced_word_count(letters, len), static_cast<double>(n));
    }
}

TEST(Words, SamplingIsDeterministicAndBounded) {
  const auto a = sample_necklaces(8, 10, 48, 11);
  const auto b = sample_necklaces(8, 10, 48, 11);
  EXPECT_EQ(a, b);
  EXPECT_LE(a.size(), 48u);
  for (const auto& w : a) {
    EXPECT_TRUE(cyclically_reduced(w));
    EXPECT_EQ(canonical_necklace(w), w);
  }
}

TEST(Traces, SquaredAdjacentRotationsAppear) {
  const RealizedPolyhedron r = realize(build_polyhedron("AA5"), 60u);
  const auto samples = sample_traces(r, 6);
  const auto gens = to_moebius_generators(r);
  PrecisionGuard g(80);
  for (const auto& s : samples) {
    EXPECT_EQ(s.element.size() % 2, 0u);
    EXPECT_LT(abs(word_matrix(gens, s.element).trace() - s.trace), ten_pow(-45));
  }
  for (const auto& e : r.poly.edges()) {
    const Complex want(Real(2 * cos(2 * pi() / e.n)));
    const bool found = std::any_of(samples.begin(), samples.end(),
                                   [&](const TraceSample& s) { return abs(s.trace - want) < ten_pow(-40); });
    EXPECT_TRUE(found) << r.poly.face(e.a) << "/" << r.poly.face(e.b);
  }
}

TEST(Itf, AA5PairSharesTheTableField) {
  const auto& a = report("AA5");
  const auto& m = report("AA5m");
  EXPECT_EQ(a.itf.degree(), 4);
  ASSERT_TRUE(a.itf_poly().has_value());
  EXPECT_EQ(a.itf_poly()->degree(), 4);
  EXPECT_TRUE(itf_contains(a.itf, table_source("AA5"), 250));
  EXPECT_TRUE(same_field(a.itf, m.itf, 250));
  const auto s5 = [](unsigned d) {
    PrecisionGuard g(d + 20);
    return Complex(sqrt(Real(5)));
  };
  EXPECT_TRUE(itf_contains(a.itf, s5, 250));
}

TEST(Itf, BB4) {
  const auto& b = report("BB4");
  EXPECT_EQ(b.itf.degree(), 4);
  EXPECT_TRUE(itf_contains(b.itf, table_source("BB4"), 250));
  ASSERT_TRUE(b.itf_poly().has_value());
  EXPECT_EQ(count_real_roots(*b.itf_poly()), 2);
}

TEST(Itf, PrimitiveElementSatisfiesItsPolynomial) {
  for (const char* name : {"AA5", "BB4", "AA4"}) {
    const auto& r = report(name);
    ASSERT_TRUE(r.itf.primitive.has_value()) << name;
    PrecisionGuard g(300);
    EXPECT_LT(abs(r.itf.primitive->minpoly.eval(r.itf.primitive->value(250))), ten_pow(-200)) << name;
  }
}

TEST(IntegralTraces, AA5HasTheNonMonicWitness) {
  const auto& a = report("AA5");
  EXPECT_FALSE(a.integral_traces());
  ASSERT_FALSE(a.traces.witnesses.empty());
  const IntPoly w = IntPoly::from_descending({5, 15, 9});
  EXPECT_TRUE(std::any_of(a.traces.witnesses.begin(), a.traces.witnesses.end(),
                          [&](const GramCertificate& c) { return c.minpoly == w; }));
  EXPECT_EQ(a.traces.certificates.size(), 10u);
}

TEST(IntegralTraces, AgreeWithTheTableNotes) {
  for (const char* name : {"AA4", "AA4m", "BB4", "BB4m", "CC5", "CC5m", "AA5m"}) {
    const CorpusEntry e = *find_corpus_entry(name);
    EXPECT_EQ(report(name).integral_traces(), e.expected_integral) << name;
  }
}

TEST(IntegralTraces, RelabelingLeavesTheVerdictAlone) {
  const RealizedPolyhedron r = refine(realize(build_polyhedron("AC4"), 50u), 200);
  const GramMatrix G = gram(r);
  std::vector<std::size_t> perm(G.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 3, perm.end());
  GramMatrix P = G;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j) P[i][j] = G[perm[i]][perm[j]];
  const auto a = has_integral_traces(G, 80);
  const auto b = has_integral_traces(P, 80);
  EXPECT_EQ(a.integral, b.integral);
  std::multiset<std::string> pa, pb;
  for (const auto& c : a.certificates) pa.insert(c.minpoly.to_string());
  for (const auto& c : b.certificates) pb.insert(c.minpoly.to_string());
  EXPECT_EQ(pa, pb);
}

TEST(Iqa, VertexWithTwoLargeAngles) {
  const auto s = iqa_symbol(build_polyhedron("AA5"));
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->a, -1);
  EXPECT_EQ(s->b, -1);
  EXPECT_TRUE(iqa_symbol(build_polyhedron("AA4")).has_value());
}

TEST(Iqa, RightAngledHasNoSymbol) {
  EXPECT_FALSE(iqa_symbol(cube(2)).has_value());
  // One large angle per vertex is still not enough.
  EXPECT_FALSE(iqa_symbol(cube(3)).has_value());
}

TEST(Arithmetic, DecidedCases) {
  EXPECT_TRUE(*report("AA4").arithmetic);
  EXPECT_TRUE(*report("BB4").arithmetic);
  EXPECT_FALSE(*report("AA4m").arithmetic);
  EXPECT_FALSE(*report("CC5").arithmetic);
  EXPECT_THROW(is_arithmetic(IntPoly::from_descending({1, 0, -2}), true, std::nullopt), Indeterminate);
}

TEST(Verdict, IntegralityMismatchSeparatesThePair) {
  EXPECT_TRUE(commensurability_verdict(report("BB4"), report("BB4m")).distinguished());
  EXPECT_TRUE(commensurability_verdict(report("AA4"), report("AA4m")).distinguished());
}

TEST(Verdict, AgreementDecidesNothing) {
  const Verdict v = commensurability_verdict(report("AA5"), report("AA5m"));
  EXPECT_FALSE(v.distinguished());
  EXPECT_FALSE(commensurability_verdict(report("CC5"), report("CC5m")).distinguished());
}
