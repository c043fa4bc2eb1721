#include <polymut/algebraic.hpp>
#include <polymut/corpus.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace polymut;

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Integer det(IntMatrix m) {
  // Bareiss elimination.
  const std::size_t n = m.size();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

AlgebraicNumber number(std::vector<long long> desc, double approx) {
  return make_algebraic(IntPoly::from_descending(desc), Complex(Real(approx)));
}

Complex value(const char* expr) {
  PrecisionGuard g(560);
  const std::string e = expr;
  if (e == "phi") return Complex((1 + sqrt(Real(5))) / 2);
  if (e == "sqrt2") return Complex(sqrt(Real(2)));
  if (e == "sqrt3") return Complex(sqrt(Real(3)));
  return Complex(Real(-3) / 2 - 3 * sqrt(Real(5)) / 10);  // alpha
}

}  // namespace

TEST(Lll, IdentityIsFixed) {
  EXPECT_EQ(lll_reduce(identity(4)), identity(4));
  EXPECT_TRUE(is_lll_reduced(identity(4)));
}

TEST(Lll, SkewedPlaneBasis) {
  const IntMatrix basis{{Integer(1), Integer(1000000)}, {Integer(0), Integer(2000001)}};
  const IntMatrix red = lll_reduce(basis);
  EXPECT_TRUE(is_lll_reduced(red));
  EXPECT_EQ(abs(det(red)), abs(det(basis)));
  // Brute force over small coefficient pairs.
  Integer best = -1;
  for (long a = -50; a <= 50; ++a)
    for (long b = -50; b <= 50; ++b) {
      if (a == 0 && b == 0) continue;
      const IntVector v{a * basis[0][0] + b * basis[1][0], a * basis[0][1] + b * basis[1][1]};
      const Integer n = dot(v, v);
      if (best < 0 || n < best) best = n;
    }
  EXPECT_EQ(dot(red[0], red[0]), best);
  EXPECT_EQ(shortest_vector_norm2(basis), best);
}

TEST(Lll, RandomBasesKeepTheirVolume) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-40, 40);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    IntMatrix b(n, IntVector(n + 1));
    for (auto& row : b)
      for (auto& x : row) x = entry(rng);
    // Square determinant of the Gram matrix is the lattice volume squared.
    IntMatrix gb(n, IntVector(n)), gr(n, IntVector(n));
    const IntMatrix red = lll_reduce(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        gb[i][j] = dot(b[i], b[j]);
        gr[i][j] = dot(red[i], red[j]);
      }
    if (det(gb) == 0) continue;
    EXPECT_EQ(det(gb), det(gr));
    EXPECT_TRUE(is_lll_reduced(red));
  }
}

TEST(Lll, RejectsBadDelta) { EXPECT_THROW(lll_reduce(identity(2), 0.2), std::invalid_argument); }

TEST(Recognize, GoldenRatio) {
  const IntPoly p = recognize_minpoly(value("phi"), 8, 250);
  EXPECT_EQ(p, IntPoly::from_descending({1, -1, -1}));
  EXPECT_TRUE(is_algebraic_integer(p));
}

TEST(Recognize, NonIntegralGramEntry) {
  const IntPoly p = recognize_minpoly(value("alpha"), 8, 250);
  EXPECT_EQ(p, IntPoly::from_descending({5, 15, 9}));
  EXPECT_FALSE(is_algebraic_integer(p));
}

TEST(Recognize, TableRootOfAA5) {
  const CorpusEntry entry = *find_corpus_entry("AA5");
  ASSERT_TRUE(entry.expected.has_value());
  PrecisionGuard g(560);
  const Complex root = table_root(*entry.expected, 520);
  EXPECT_EQ(recognize_minpoly(root, 16, 250), entry.expected->poly);
}

TEST(Recognize, RationalsAndIntegers) {
  PrecisionGuard g(560);
  EXPECT_EQ(recognize_minpoly(Complex(Real(3) / 7), 4, 250), IntPoly::from_descending({7, -3}));
  EXPECT_EQ(recognize_minpoly(Complex(Real(-2)), 4, 250), IntPoly::from_descending({1, 2}));
  EXPECT_FALSE(is_algebraic_integer(IntPoly::from_descending({2, -1})));
}

TEST(Recognize, TranscendentalRaises) {
  PrecisionGuard g(560);
  EXPECT_THROW(recognize_minpoly(Complex(pi()), 6, 250), NoRelation);
}

TEST(Recognize, RootSatisfiesTheRecoveredPolynomial) {
  for (const char* e : {"phi", "sqrt2", "sqrt3", "alpha"}) {
    const Complex x = value(e);
    const IntPoly p = recognize_minpoly(x, 8, 250);
    PrecisionGuard g(560);
    EXPECT_LT(abs(p.eval(x)), ten_pow(-200)) << e;
  }
}

TEST(FieldJoin, SingleQuadratic) {
  const NumberField f = field_join({number({1, 0, -2}, 1.41421356)});
  EXPECT_EQ(f.degree(), 2);
  EXPECT_EQ(f.theta.minpoly, IntPoly::from_descending({1, 0, -2}));
}

TEST(FieldJoin, EmptyIsRational) {
  const NumberField f = field_join({});
  EXPECT_EQ(f.degree(), 1);
}

TEST(FieldJoin, TwoQuadraticsGiveDegreeFour) {
  const NumberField f = field_join({number({1, 0, -2}, 1.41421356), number({1, 0, -3}, 1.7320508)});
  EXPECT_EQ(f.degree(), 4);
  for (const auto& g : f.generators) EXPECT_TRUE(contains(f, g, 200).has_value());
}

TEST(FieldJoin, GeneratorsAreInTheJoin) {
  const NumberField f = field_join({number({1, -1, -1}, 1.618034), number({5, 15, 9}, -2.170820)});
  EXPECT_EQ(f.degree(), 2);
  ASSERT_EQ(f.generator_coords.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    PrecisionGuard g(260);
    const Complex back = evaluate_coords(f, f.generator_coords[i], 200);
    EXPECT_LT(abs(back - f.generators[i].value(200)), ten_pow(-150));
  }
}

TEST(Contains, GoldenRatioSquared) {
  const NumberField f = field_join({number({1, -1, -1}, 1.618034)});
  const auto phi2 = [](unsigned d) {
    PrecisionGuard g(d + 20);
    const Real phi = (1 + sqrt(Real(5))) / 2;
    return Complex(phi * phi);
  };
  const auto c = contains(f, phi2, 200);
  ASSERT_TRUE(c.has_value());
  // θ is ±φ or φ + k; check by evaluation rather than fixed coordinates.
  PrecisionGuard g(260);
  EXPECT_LT(abs(evaluate_coords(f, *c, 200) - phi2(200)), ten_pow(-150));
  if (f.theta.minpoly == IntPoly::from_descending({1, -1, -1}) && f.theta.approx.re > 0)
    EXPECT_EQ(*c, (std::vector<Rational>{Rational(1), Rational(1)}));
}

TEST(Contains, RootThreeIsNotInRootTwoField) {
  const NumberField f = field_join({number({1, 0, -2}, 1.41421356)});
  const auto sqrt3 = [](unsigned d) {
    PrecisionGuard g(d + 20);
    return Complex(sqrt(Real(3)));
  };
  EXPECT_FALSE(contains(f, sqrt3, 200).has_value());
}

TEST(Contains, ThetaHasUnitCoordinate) {
  const NumberField f = field_join({number({1, 0, -2}, 1.41421356), number({1, 0, -3}, 1.7320508)});
  const auto c = contains(f, f.theta, 200);
  ASSERT_TRUE(c.has_value());
  std::vector<Rational> unit(f.degree(), Rational(0));
  unit[1] = 1;
  EXPECT_EQ(*c, unit);
}
