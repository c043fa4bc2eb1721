#include "support.hpp"

#include <polymut/corpus.hpp>
#include <polymut/lorentz.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace polymut;

namespace {

Real s5() { return sqrt(Real(5)); }

/// Rows of the closed-form AA5 normal matrix.
std::vector<Vec4> n_aa5() {
  const Real r5 = s5();
  return {{Real(0), Real(0), Real(0), Real(1)},
          {Real(0), Real(0), Real(-1), Real(0)},
          {Real(0), Real(-sqrt(10 - 2 * r5) / 4), Real((1 + r5) / 4), Real(0)},
          {Real(-sqrt(6 * r5 + 11) / 2), Real(sqrt(50 + 22 * r5) / 4), Real((1 + r5) / 4), Real(Real(-1) / 2)},
          {Real(-sqrt(-130 + 90 * r5) / 20), Real(0), Real(0), Real(Real(-3) / 4 - 3 * r5 / 20)}};
}

Real max_diff(const std::vector<Vec4>& a, const std::vector<Vec4>& b) {
  Real m(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t c = 0; c < 4; ++c) m = max(m, Real(abs(a[i][c] - b[i][c])));
  return m;
}

const RealizedPolyhedron& aa5() {
  static const RealizedPolyhedron r = realize(build_polyhedron("AA5"), 50u);
  return r;
}

AngledPolyhedron prism(int q) {
  AngledPolyhedron p;
  for (const char* f : {"top", "a", "b", "c", "bottom"}) p.add_face(f);
  p.add_edge("a", "b", q);
  p.add_edge("b", "c", q);
  p.add_edge("c", "a", q);
  for (const char* l : {"a", "b", "c"}) {
    p.add_edge("top", l, 2);
    p.add_edge("bottom", l, 2);
  }
  return p;
}

}  // namespace

TEST(Minkowski, SignatureAndClosedFormRows) {
  PrecisionGuard g(60);
  const Vec4 et{Real(1), Real(0), Real(0), Real(0)};
  EXPECT_EQ(minkowski_inner(et, et), -1);
  const auto N = n_aa5();
  EXPECT_LT(abs(minkowski_inner(N[0], N[3]) + Real(0.5)), ten_pow(-50));
  EXPECT_LT(abs(2 * minkowski_inner(N[4], N[4]) - 2), ten_pow(-50));
}

TEST(Realize, AA5MatchesTheClosedFormNormals) {
  PrecisionGuard g(70);
  EXPECT_LT(max_diff(canonicalize(aa5()).normals, n_aa5()), ten_pow(-40));
  EXPECT_LT(aa5().residual, ten_pow(-40));
}

TEST(Realize, AA4LateralEntriesAreMinusRootTwo) {
  const RealizedPolyhedron r = realize(build_polyhedron("AA4"), 50u);
  const GramMatrix G = gram(r);
  PrecisionGuard g(70);
  const Real root2 = sqrt(Real(2));
  const auto& p = r.poly;
  for (const auto& [a, b] : {std::pair<const char*, const char*>{"lat_0", "lat_1"}, {"lat_1", "lat_2"}, {"lat_2", "lat_0"}})
    EXPECT_LT(abs(G[p.index_of(a)][p.index_of(b)] + root2), ten_pow(-45));
}

TEST(Realize, ThirdAnglePrismIsNotRealizable) { EXPECT_THROW(realize(prism(3), 50u), NotRealizable); }

TEST(Realize, EdgeAndDisjointnessConditionsOnTheCorpus) {
  for (const auto& e : corpus()) {
    const RealizedPolyhedron r = realize(build_polyhedron(e.name), 50u);
    PrecisionGuard g(70);
    const auto& p = r.poly;
    for (std::size_t i = 0; i < p.num_faces(); ++i) {
      EXPECT_LT(abs(minkowski_inner(r.normals[i], r.normals[i]) - 1), ten_pow(-40));
      for (std::size_t j = i + 1; j < p.num_faces(); ++j) {
        const Real ip = minkowski_inner(r.normals[i], r.normals[j]);
        if (p.adjacent(i, j))
          EXPECT_LT(abs(ip + cos(pi() / p.angle(i, j))), ten_pow(-40)) << e.name.str();
        else
          EXPECT_LE(ip, -1 + ten_pow(-40)) << e.name.str() << " " << p.face(i) << "/" << p.face(j);
      }
    }
    EXPECT_EQ(negative_eigenvalues(gram(r)), 1) << e.name.str();
    EXPECT_NO_THROW(vertices(r)) << e.name.str();
  }
}

TEST(Realize, GaugeMatchesTheZeroPattern) {
  const auto& V = aa5().normals;
  PrecisionGuard g(70);
  const Real tiny = ten_pow(-45);
  EXPECT_LT(abs(V[0][0]), tiny);
  EXPECT_LT(abs(V[0][1]), tiny);
  EXPECT_LT(abs(V[0][2]), tiny);
  EXPECT_LT(abs(V[0][3] - 1), tiny);
  EXPECT_LT(abs(V[1][0]), tiny);
  EXPECT_LT(abs(V[1][1]), tiny);
  EXPECT_LT(V[1][2], 0);
  EXPECT_LT(abs(V[2][0]), tiny);
  const RealizedPolyhedron once = canonicalize(aa5());
  const RealizedPolyhedron twice = canonicalize(once);
  EXPECT_LT(max_diff(once.normals, twice.normals), ten_pow(-45));
}

TEST(Refine, ReachesThreeHundredDigits) {
  const RealizedPolyhedron r = refine(aa5(), 300);
  PrecisionGuard g(320);
  EXPECT_LT(max_diff(canonicalize(r).normals, n_aa5()), ten_pow(-290));
}

TEST(Refine, IsAFixedPoint) {
  const RealizedPolyhedron r = refine(aa5(), 120);
  const RealizedPolyhedron rr = refine(r, 120);
  PrecisionGuard g(140);
  EXPECT_LT(max_diff(r.normals, rr.normals), ten_pow(-110));
}

TEST(Refine, StubWithoutNormalsFails) {
  RealizedPolyhedron stub;
  stub.poly = prism(3);
  EXPECT_THROW(refine(stub, 100), NoConvergence);
}

TEST(Refine, NewtonConvergesQuadratically) {
  const RealizedPolyhedron r = refine(realize(build_polyhedron("BC4"), 30u), 400);
  const auto& h = r.newton_history;
  ASSERT_GE(h.size(), 2u);
  int checked = 0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    if (!(h[k] < ten_pow(-8)) || h[k] == 0 || h[k + 1] == 0) continue;
    // Stop once the residual sits at the working-precision floor.
    if (h[k + 1] < ten_pow(-380)) break;
    const double ratio = (log10(h[k + 1]) / log10(h[k])).convert_to<double>();
    EXPECT_GE(ratio, 1.8) << "step " << k;
    ++checked;
  }
  EXPECT_GE(checked, 1);
}

TEST(Gram, AA5AndAA5mEntries) {
  PrecisionGuard g(70);
  const Real phi = (1 + s5()) / 2;
  const Real alpha = Real(-3) / 2 - 3 * s5() / 10;
  const Real beta = -2 - s5() / 5;
  const GramMatrix G = gram(aa5());
  EXPECT_LT(abs(G[0][4] - alpha), ten_pow(-40));
  EXPECT_LT(abs(G[1][2] + phi), ten_pow(-40));
  EXPECT_LT(abs(G[0][3] + 1), ten_pow(-40));
  EXPECT_NEAR(G[0][4].convert_to<double>(), -2.17082039, 1e-8);
  const GramMatrix Gm = gram(realize(build_polyhedron("AA5m"), 50u));
  EXPECT_LT(abs(Gm[0][4] - beta), ten_pow(-40));
  EXPECT_LT(abs(Gm[2][4] + 1), ten_pow(-40));
  EXPECT_NEAR(Gm[0][4].convert_to<double>(), -2.44721360, 1e-8);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_LT(abs(G[i][i] - 2), ten_pow(-45));
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(G[i][j], G[j][i]);
  }
}

TEST(Vertices, AA5) {
  const auto vs = vertices(aa5());
  ASSERT_EQ(vs.size(), 6u);
  PrecisionGuard g(70);
  const auto& V = aa5().normals;
  for (const auto& v : vs) {
    EXPECT_LT(abs(minkowski_inner(v.point, v.point) + 1), ten_pow(-40));
    EXPECT_GT(v.point[0], 0);
    for (std::size_t f = 0; f < V.size(); ++f) {
      const Real ip = minkowski_inner(v.point, V[f]);
      const bool incident = f == v.faces[0] || f == v.faces[1] || f == v.faces[2];
      if (incident)
        EXPECT_LT(abs(ip), ten_pow(-40));
      else
        EXPECT_GT(ip, 0);  // interior side
    }
  }
}

TEST(CuttingPlane, AA5ClosedForm) {
  const auto c = find_prismatic_3_circuits(aa5().poly).front();
  const CuttingPlane plane = cutting_plane(aa5(), c);
  PrecisionGuard g(70);
  const Real t = 1 / sqrt(10 + 6 * s5());
  const Vec4 expect{t, Real(0), Real(0), Real(t * sqrt(6 * s5() + 11))};
  Real plus(0), minus(0);
  for (std::size_t k = 0; k < 4; ++k) {
    plus = max(plus, Real(abs(plane.normal[k] - expect[k])));
    minus = max(minus, Real(abs(plane.normal[k] + expect[k])));
  }
  EXPECT_LT(min(plus, minus), ten_pow(-40));
  EXPECT_LT(abs(minkowski_inner(plane.normal, plane.normal) - 1), ten_pow(-40));
  for (auto f : c.faces) EXPECT_LT(abs(minkowski_inner(plane.normal, aa5().normals[f])), ten_pow(-40));
}

TEST(CuttingPlane, TripleAtAVertexIsNotPerpendicularizable) {
  const auto& p = aa5().poly;
  const PrismaticCircuit fake = make_circuit(p, p.index_of("cap_top"), p.index_of("lat_1"), p.index_of("lat_2"));
  PrismaticCircuit eq = fake;
  eq.angles = {2, 2, 2};
  EXPECT_THROW(cutting_plane(aa5(), eq), NotPerpendicularizable);
}

TEST(Rotation, IsometryOfOrderThree) {
  for (const char* name : {"AA5", "BB4", "AC5", "CC8"}) {
    const RealizedPolyhedron r = realize(build_polyhedron(name), 50u);
    for (const auto& c : find_prismatic_3_circuits(r.poly)) {
      if (!c.eligible()) continue;
      const auto [iso, order] = rotation_defects(mutation_rotation(r, c, cutting_plane(r, c)));
      EXPECT_LT(iso, ten_pow(-38)) << name;
      EXPECT_LT(order, ten_pow(-38)) << name;
    }
  }
}

TEST(MutateGeometric, MatchesTheCombinatorialMutant) {
  for (const auto& e : corpus()) {
    if (e.name.mutant) continue;
    const RealizedPolyhedron r = realize(build_polyhedron(e.name), 50u);
    PairName m = e.name;
    m.mutant = true;
    const RealizedPolyhedron target = realize(build_polyhedron(m), 50u);
    PrismaticCircuit lateral{};
    for (const auto& c : find_prismatic_3_circuits(r.poly)) {
      std::set<std::string> names{r.poly.face(c.faces[0]), r.poly.face(c.faces[1]), r.poly.face(c.faces[2])};
      if (names == std::set<std::string>{"lat_0", "lat_1", "lat_2"}) lateral = c;
    }
    const RealizedPolyhedron mutated = mutate_geometric(r, lateral);
    EXPECT_EQ(mutated.poly, target.poly) << e.name.str();
    const auto d = testsupport::congruence_defect(mutated, target);
    ASSERT_TRUE(d.has_value());
    PrecisionGuard g(70);
    EXPECT_LT(*d, ten_pow(-40)) << e.name.str();
    EXPECT_LT(mutated.residual, ten_pow(-40)) << e.name.str();
  }
}

TEST(MutateGeometric, HalvesMoveRigidly) {
  const RealizedPolyhedron r = realize(build_polyhedron("BC5"), 50u);
  const auto c = find_prismatic_3_circuits(r.poly).front();
  const auto side = plane_sides(r, cutting_plane(r, c));
  const RealizedPolyhedron m = mutate_geometric(r, c);
  const GramMatrix G = gram(r);
  const GramMatrix Gm = gram(m);
  PrecisionGuard g(70);
  int compared = 0;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j) {
      if (side[i] * side[j] < 0) continue;
      if (side[i] + side[j] == 1) continue;  // circuit against lower: permuted below
      EXPECT_LT(abs(G[i][j] - Gm[i][j]), ten_pow(-40)) << i << "," << j;
      ++compared;
    }
  EXPECT_GT(compared, 0);
  // Rot cycles the circuit faces, so each lower face sees the same three entries.
  for (std::size_t j = 0; j < G.size(); ++j) {
    if (side[j] <= 0) continue;
    std::multiset<std::string> before, after;
    const auto key = [](const Real& x) { return abs(x) < ten_pow(-40) ? std::string("0") : to_decimal(x, 30); };
    for (auto f : c.faces) {
      before.insert(key(G[f][j]));
      after.insert(key(Gm[f][j]));
    }
    EXPECT_EQ(before, after) << j;
  }
}

TEST(MutateGeometric, TwiceGivesTheMirroredMutant) {
  const auto c = find_prismatic_3_circuits(aa5().poly).front();
  const RealizedPolyhedron once = mutate_geometric(aa5(), c);
  const RealizedPolyhedron twice = mutate_geometric(once, c);
  const RealizedPolyhedron thrice = mutate_geometric(twice, c);
  PrecisionGuard g(70);
  EXPECT_LT(*testsupport::congruence_defect(twice, once), ten_pow(-40));
  EXPECT_LT(*testsupport::congruence_defect(thrice, aa5()), ten_pow(-40));
}

TEST(Moebius, ReflectionsAreInvolutionsWithUnitDeterminant) {
  const auto gens = to_moebius_generators(aa5());
  PrecisionGuard g(70);
  for (const auto& m : gens) {
    EXPECT_LT(abs(m.det() - Complex(1)), ten_pow(-40));
    const Mat2 sq = m * conj(m);
    const Real sign = sq.a.re;
    EXPECT_LT(abs(abs(sign) - 1), ten_pow(-40));
    EXPECT_LT(abs(sq.b), ten_pow(-40));
    EXPECT_LT(abs(sq.c), ten_pow(-40));
    EXPECT_LT(abs(sq.d - Complex(sign)), ten_pow(-40));
  }
}

TEST(Moebius, EllipticTraceIdentityForEveryAngle) {
  std::set<int> seen;
  for (const char* name : {"AA5", "CC6", "CC7", "CC8", "AB4"}) {
    const RealizedPolyhedron r = realize(build_polyhedron(name), 50u);
    const auto gens = to_moebius_generators(r);
    PrecisionGuard g(70);
    for (const auto& e : r.poly.edges()) {
      const Complex tr = word_matrix(gens, {e.a, e.b}).trace();
      const Real c = cos(pi() / e.n);
      EXPECT_LT(abs(tr * tr - Complex(Real(4 * c * c))), ten_pow(-40)) << name << " n=" << e.n;
      seen.insert(e.n);
    }
  }
  EXPECT_EQ(seen, (std::set<int>{2, 3, 4, 5, 6, 7, 8}));
}

TEST(Moebius, SquaredLateralRotationTrace) {
  const auto gens = to_moebius_generators(aa5());
  const auto& p = aa5().poly;
  const std::size_t i = p.index_of("lat_1");
  const std::size_t j = p.index_of("lat_2");
  PrecisionGuard g(70);
  const Complex tr = word_matrix(gens, {i, j, i, j}).trace();
  EXPECT_LT(abs(tr - Complex(Real(2 * cos(2 * pi() / 5)))), ten_pow(-40));
  EXPECT_NEAR(tr.re.convert_to<double>(), 0.6180339887, 1e-10);
}
