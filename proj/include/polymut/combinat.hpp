#pragma once

// Pre-geometric Coxeter polyhedra: faces, edges with angle denominators,
// derived vertices, half-polyhedron templates, gluing, prismatic circuits,
// combinatorial mutation and Andreev-style diagnostics.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polymut {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct AngleOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MismatchedQ : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IneligibleCircuit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoSideAssignment : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  std::size_t a;
  std::size_t b;
  int n;
};

using Triple = std::array<std::size_t, 3>;

/// Faces (stable string ids, in row order) and edges carrying dihedral angles
/// π/n. Vertices are derived: for a simple polyhedron the face-adjacency graph
/// is a planar triangulation whose non-separating triangles are the vertices.
class AngledPolyhedron {
 public:
  std::size_t add_face(const std::string& id) {
    if (id.empty()) throw std::invalid_argument("empty face id");
    if (index_.count(id)) throw std::invalid_argument("duplicate face '" + id + "'");
    index_[id] = faces_.size();
    faces_.push_back(id);
    return faces_.size() - 1;
  }

  void add_edge(const std::string& a, const std::string& b, int n) { add_edge(index_of(a), index_of(b), n); }

  void add_edge(std::size_t a, std::size_t b, int n) {
    if (a == b) throw std::invalid_argument("edge from face '" + faces_.at(a) + "' to itself");
    if (n < 2) throw AngleOutOfRange("angle denominator must be >= 2, got " + std::to_string(n));
    if (angle(a, b) != 0) throw std::invalid_argument("duplicate edge " + faces_[a] + " " + faces_[b]);
    if (a > b) std::swap(a, b);
    edges_.push_back({a, b, n});
    angles_[{a, b}] = n;
  }

  std::size_t num_faces() const { return faces_.size(); }
  const std::vector<std::string>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& face(std::size_t i) const { return faces_.at(i); }

  bool has_face(const std::string& id) const { return index_.count(id) != 0; }
  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown face '" + id + "'");
    return it->second;
  }

  /// Angle denominator of the edge between faces a and b, or 0 if they are not adjacent.
  int angle(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    auto it = angles_.find({a, b});
    return it == angles_.end() ? 0 : it->second;
  }
  bool adjacent(std::size_t a, std::size_t b) const { return angle(a, b) != 0; }

  std::vector<std::size_t> neighbors(std::size_t f) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges_) {
      if (e.a == f) out.push_back(e.b);
      if (e.b == f) out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Mutually adjacent face triples (sorted indices).
  std::vector<Triple> triangles() const {
    std::vector<Triple> out;
    const std::size_t n = faces_.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!adjacent(i, j)) continue;
        for (std::size_t k = j + 1; k < n; ++k)
          if (adjacent(i, k) && adjacent(j, k)) out.push_back({i, j, k});
      }
    return out;
  }

  /// True if deleting the three faces disconnects the adjacency graph.
  bool separates(const Triple& t) const {
    const std::size_t n = faces_.size();
    std::vector<bool> gone(n, false);
    for (auto f : t) gone[f] = true;
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!gone[i]) {
        start = i;
        break;
      }
    if (start == n) return false;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t f = stack.back();
      stack.pop_back();
      for (auto g : neighbors(f))
        if (!gone[g] && !seen[g]) {
          seen[g] = true;
          ++reached;
          stack.push_back(g);
        }
    }
    return reached != n - 3;
  }

  /// Vertices as sorted face-index triples.
  std::vector<Triple> vertices() const {
    std::vector<Triple> out;
    for (const auto& t : triangles())
      if (!separates(t)) out.push_back(t);
    return out;
  }

  bool is_vertex(std::size_t a, std::size_t b, std::size_t c) const {
    Triple t{a, b, c};
    std::sort(t.begin(), t.end());
    if (!(adjacent(t[0], t[1]) && adjacent(t[1], t[2]) && adjacent(t[0], t[2]))) return false;
    return !separates(t);
  }

  /// Copy with faces permuted: new face i is old face order[i].
  AngledPolyhedron reordered(const std::vector<std::size_t>& order) const {
    AngledPolyhedron p;
    for (auto i : order) p.add_face(faces_.at(i));
    if (p.num_faces() != faces_.size()) throw std::invalid_argument("reordered: not a permutation");
    for (const auto& e : edges_) p.add_edge(faces_[e.a], faces_[e.b], e.n);
    return p;
  }

  bool operator==(const AngledPolyhedron& o) const {
    if (faces_ != o.faces_ || edges_.size() != o.edges_.size()) return false;
    for (const auto& e : edges_)
      if (o.angle(e.a, e.b) != e.n) return false;
    return true;
  }

 private:
  std::vector<std::string> faces_;
  std::map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::map<std::pair<std::size_t, std::size_t>, int> angles_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline int parse_denominator(const std::string& s, int line) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "bad angle denominator '" + s + "'");
  }
  if (used != s.size()) throw ParseError(line, "bad angle denominator '" + s + "'");
  if (n < 2) throw ParseError(line, "angle denominator must be >= 2");
  return n;
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace detail

/// Reads `face <id>` / `edge <id1> <id2> <n>` statements; `#` starts a comment.
inline AngledPolyhedron parse_polyhedron(const std::string& text) {
  AngledPolyhedron p;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto w = detail::split_words(detail::strip_comment(raw));
    if (w.empty()) continue;
    try {
      if (w[0] == "face" && w.size() == 2) {
        p.add_face(w[1]);
      } else if (w[0] == "edge" && w.size() == 4) {
        p.add_edge(w[1], w[2], detail::parse_denominator(w[3], line));
      } else {
        throw ParseError(line, "expected 'face <id>' or 'edge <id1> <id2> <n>'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line, e.what());
    }
  }
  return p;
}

inline std::string format_polyhedron(const AngledPolyhedron& p, const std::string& header = "") {
  std::ostringstream out;
  if (!header.empty()) out << "# " << header << "\n";
  for (const auto& f : p.faces()) out << "face " << f << "\n";
  for (const auto& e : p.edges()) out << "edge " << p.face(e.a) << " " << p.face(e.b) << " " << e.n << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Half-polyhedron templates

enum class HalfKind { A, B, C };

inline char kind_letter(HalfKind k) { return k == HalfKind::A ? 'A' : k == HalfKind::B ? 'B' : 'C'; }

inline HalfKind kind_from_letter(char c) {
  switch (c) {
    case 'A': return HalfKind::A;
    case 'B': return HalfKind::B;
    case 'C': return HalfKind::C;
    default: throw std::invalid_argument(std::string("unknown half kind '") + c + "'");
  }
}

/// A half-polyhedron with its interface triangle and three lateral faces.
/// `lateral[i]` is the face across interface edge i; the mirror symmetry
/// fixes lateral[0] and swaps lateral[1] with lateral[2].
struct HalfTemplate {
  HalfKind kind;
  int q;
  AngledPolyhedron poly;
  std::string interface_face;
  std::array<std::string, 3> lateral;
  /// Face permutation of the mirror symmetry (pairs swapped; others fixed).
  std::map<std::string, std::string> mirror;
  /// The non-lateral cap face meeting lateral[1] and lateral[2] at a vertex.
  std::string apex;
};

struct TemplateSource {
  std::string text;
};

/// Template syntax: the polyhedron statements, with the token `q` allowed as
/// an angle denominator, plus
///   interface <id>
///   lateral <id0> <id1> <id2>
///   mirror <idA> <idB>        (faces swapped by the symmetry, repeatable)
inline HalfTemplate parse_template(const std::string& text, HalfKind kind, int q) {
  HalfTemplate h{kind, q, {}, {}, {}, {}, {}};
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::vector<std::tuple<std::string, std::string, std::string, int>> edges;
  while (std::getline(in, raw)) {
    ++line;
    const auto w = detail::split_words(detail::strip_comment(raw));
    if (w.empty()) continue;
    try {
      if (w[0] == "face" && w.size() == 2) {
        h.poly.add_face(w[1]);
      } else if (w[0] == "edge" && w.size() == 4) {
        const int n = w[3] == "q" ? q : detail::parse_denominator(w[3], line);
        h.poly.add_edge(w[1], w[2], n);
      } else if (w[0] == "interface" && w.size() == 2) {
        h.interface_face = w[1];
      } else if (w[0] == "lateral" && w.size() == 4) {
        h.lateral = {w[1], w[2], w[3]};
      } else if (w[0] == "mirror" && w.size() == 3) {
        h.mirror[w[1]] = w[2];
        h.mirror[w[2]] = w[1];
      } else {
        throw ParseError(line, "unrecognized template statement");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line, e.what());
    }
  }
  if (!h.poly.has_face(h.interface_face)) throw std::invalid_argument("template lacks an interface face");
  const std::size_t iface = h.poly.index_of(h.interface_face);
  if (h.poly.neighbors(iface).size() != 3) throw std::invalid_argument("interface face is not a triangle");
  for (const auto& l : h.lateral)
    if (!h.poly.has_face(l) || !h.poly.adjacent(iface, h.poly.index_of(l)))
      throw std::invalid_argument("lateral face '" + l + "' does not border the interface");
  const std::size_t l1 = h.poly.index_of(h.lateral[1]);
  const std::size_t l2 = h.poly.index_of(h.lateral[2]);
  for (std::size_t f = 0; f < h.poly.num_faces(); ++f) {
    if (f == iface || f == l1 || f == l2 || h.poly.face(f) == h.lateral[0]) continue;
    if (h.poly.is_vertex(f, l1, l2)) h.apex = h.poly.face(f);
  }
  if (h.apex.empty()) throw std::invalid_argument("template has no cap face at lateral[1], lateral[2]");
  return h;
}

/// True if the stored mirror permutation is an angle-preserving automorphism
/// fixing the interface and lateral[0] and swapping lateral[1], lateral[2].
inline bool mirror_is_symmetry(const HalfTemplate& h) {
  auto image = [&](const std::string& f) {
    auto it = h.mirror.find(f);
    return it == h.mirror.end() ? f : it->second;
  };
  if (image(h.interface_face) != h.interface_face || image(h.lateral[0]) != h.lateral[0] ||
      image(h.lateral[1]) != h.lateral[2])
    return false;
  for (const auto& e : h.poly.edges()) {
    const auto a = h.poly.index_of(image(h.poly.face(e.a)));
    const auto b = h.poly.index_of(image(h.poly.face(e.b)));
    if (h.poly.angle(a, b) != e.n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Gluing

/// Side of each face relative to the mutation circuit: +1 upper half,
/// -1 lower half, 0 on the circuit.
struct SideAssignment {
  std::vector<std::string> upper;
  std::vector<std::string> lower;
};

/// Glue h1 (upper) to h2 (lower) along their interfaces. The face of h1
/// across interface edge i merges with the face of h2 across edge
/// (i + offset) mod 3. Face order: h1's apex, lat_1, lat_2, lat_0, h1's other
/// caps, then h2's caps; upper caps get suffix "_top", lower caps "_bot".
inline AngledPolyhedron glue(const HalfTemplate& h1, const HalfTemplate& h2, int offset) {
  if (h1.q != h2.q) throw MismatchedQ("glue: halves have q = " + std::to_string(h1.q) + " and " + std::to_string(h2.q));
  offset = ((offset % 3) + 3) % 3;
  auto lateral_index = [](const HalfTemplate& h, const std::string& f) -> int {
    for (int i = 0; i < 3; ++i)
      if (h.lateral[static_cast<std::size_t>(i)] == f) return i;
    return -1;
  };
  auto name1 = [&](const std::string& f) {
    const int i = lateral_index(h1, f);
    return i >= 0 ? "lat_" + std::to_string(i) : f + "_top";
  };
  auto name2 = [&](const std::string& f) {
    const int i = lateral_index(h2, f);
    return i >= 0 ? "lat_" + std::to_string((i + 3 - offset) % 3) : f + "_bot";
  };
  AngledPolyhedron p;
  p.add_face(name1(h1.apex));
  for (const char* l : {"lat_1", "lat_2", "lat_0"}) p.add_face(l);
  for (const auto& f : h1.poly.faces())
    if (f != h1.interface_face && f != h1.apex && lateral_index(h1, f) < 0) p.add_face(name1(f));
  for (const auto& f : h2.poly.faces())
    if (f != h2.interface_face && lateral_index(h2, f) < 0) p.add_face(name2(f));

  auto copy_edges = [&](const HalfTemplate& h, auto&& rename) {
    for (const auto& e : h.poly.edges()) {
      const auto& fa = h.poly.face(e.a);
      const auto& fb = h.poly.face(e.b);
      if (fa == h.interface_face || fb == h.interface_face) continue;
      const auto a = p.index_of(rename(fa));
      const auto b = p.index_of(rename(fb));
      const int have = p.angle(a, b);
      if (have == 0) {
        p.add_edge(a, b, e.n);
      } else if (have != e.n) {
        throw MismatchedQ("glue: lateral edge angles disagree");
      }
    }
  };
  copy_edges(h1, name1);
  copy_edges(h2, name2);
  return p;
}

inline SideAssignment glued_sides(const AngledPolyhedron& p) {
  SideAssignment s;
  auto ends_with = [](const std::string& f, const std::string& suf) {
    return f.size() > suf.size() && f.compare(f.size() - suf.size(), suf.size(), suf) == 0;
  };
  for (const auto& f : p.faces()) {
    if (ends_with(f, "_top")) s.upper.push_back(f);
    if (ends_with(f, "_bot")) s.lower.push_back(f);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Prismatic circuits and mutation

struct PrismaticCircuit {
  std::array<std::size_t, 3> faces;
  std::array<int, 3> angles;  // edges (f0,f1), (f1,f2), (f2,f0)

  bool eligible() const { return angles[0] == angles[1] && angles[1] == angles[2]; }
  int q() const { return eligible() ? angles[0] : 0; }
};

inline PrismaticCircuit make_circuit(const AngledPolyhedron& p, std::size_t a, std::size_t b, std::size_t c) {
  return {{a, b, c}, {p.angle(a, b), p.angle(b, c), p.angle(c, a)}};
}

/// Every mutually adjacent face triple sharing no vertex. Each circuit is
/// listed as (smallest, largest, middle) face index; with the glued face
/// order this makes mutation step the gluing offset forward by one.
inline std::vector<PrismaticCircuit> find_prismatic_3_circuits(const AngledPolyhedron& p) {
  std::vector<PrismaticCircuit> out;
  for (const auto& t : p.triangles())
    if (p.separates(t)) out.push_back(make_circuit(p, t[0], t[2], t[1]));
  return out;
}

/// The two components left after deleting the circuit's faces (face indices).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> circuit_components(const AngledPolyhedron& p,
                                                                                         const PrismaticCircuit& c) {
  const std::size_t n = p.num_faces();
  std::vector<int> comp(n, -1);
  for (auto f : c.faces) comp[f] = -2;
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = count;
    while (!stack.empty()) {
      const auto f = stack.back();
      stack.pop_back();
      for (auto g : p.neighbors(f))
        if (comp[g] == -1) {
          comp[g] = count;
          stack.push_back(g);
        }
    }
    ++count;
  }
  if (count != 2) throw NoSideAssignment("circuit does not split the polyhedron in two");
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (comp[f] == 0) out.first.push_back(f);
    if (comp[f] == 1) out.second.push_back(f);
  }
  return out;
}

/// Per-face side (+1 upper, -1 lower, 0 circuit) after checking that the
/// assignment covers exactly the two halves cut out by the circuit.
inline std::vector<int> resolve_sides(const AngledPolyhedron& p, const PrismaticCircuit& c, const SideAssignment& s) {
  if (s.upper.empty() || s.lower.empty()) throw NoSideAssignment("both sides must be nonempty");
  std::vector<int> side(p.num_faces(), 2);
  for (auto f : c.faces) side[f] = 0;
  for (const auto& f : s.upper) {
    if (!p.has_face(f)) throw NoSideAssignment("unknown face '" + f + "'");
    side[p.index_of(f)] = 1;
  }
  for (const auto& f : s.lower) {
    if (!p.has_face(f)) throw NoSideAssignment("unknown face '" + f + "'");
    const auto i = p.index_of(f);
    if (side[i] != 2) throw NoSideAssignment("face '" + f + "' assigned twice");
    side[i] = -1;
  }
  for (std::size_t f = 0; f < side.size(); ++f)
    if (side[f] == 2) throw NoSideAssignment("face '" + p.face(f) + "' has no side");
  for (const auto& e : p.edges())
    if (side[e.a] * side[e.b] < 0) throw NoSideAssignment("upper and lower faces share an edge");
  return side;
}

/// Re-glues the lower side rotated one step along the circuit: a lower face
/// bordering circuit face f_i ends up bordering f_(i+1).
inline AngledPolyhedron mutate_combinatorial(const AngledPolyhedron& p, const PrismaticCircuit& c,
                                             const SideAssignment& sides) {
  if (!c.eligible()) throw IneligibleCircuit("circuit angles are not all equal");
  const auto side = resolve_sides(p, c, sides);
  AngledPolyhedron out;
  for (const auto& f : p.faces()) out.add_face(f);
  auto rotate = [&](std::size_t f) {
    for (std::size_t i = 0; i < 3; ++i)
      if (c.faces[i] == f) return c.faces[(i + 1) % 3];
    return f;
  };
  for (const auto& e : p.edges()) {
    std::size_t a = e.a;
    std::size_t b = e.b;
    if (side[a] == -1 && side[b] == 0) b = rotate(b);
    if (side[b] == -1 && side[a] == 0) a = rotate(a);
    out.add_edge(a, b, e.n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

struct Diagnostics {
  std::size_t faces = 0;
  std::size_t edges = 0;
  std::size_t vertices = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

/// Sign of Σ 1/n_i − bound, exactly.
inline int reciprocal_sum_compare(const std::vector<int>& ns, long bound) {
  long num = 0;
  long den = 1;
  for (int n : ns) {
    num = num * n + den;
    den *= n;
  }
  const long rhs = bound * den;
  return num > rhs ? 1 : num < rhs ? -1 : 0;
}

}  // namespace detail

/// Necessary conditions for a compact Coxeter polyhedron: simple trivalent
/// combinatorics, Euler relation, vertex angle sums > π, prismatic 3-circuit
/// sums < π and prismatic 4-circuit sums < 2π.
inline Diagnostics validate(const AngledPolyhedron& p) {
  Diagnostics d;
  d.faces = p.num_faces();
  d.edges = p.edges().size();
  const auto verts = p.vertices();
  d.vertices = verts.size();
  auto name = [&](std::size_t f) { return p.face(f); };
  if (d.faces < 4) d.failures.push_back("fewer than four faces");
  if (static_cast<long>(d.vertices) - static_cast<long>(d.edges) + static_cast<long>(d.faces) != 2)
    d.failures.push_back("Euler relation fails: V - E + F = " +
                         std::to_string(static_cast<long>(d.vertices) - static_cast<long>(d.edges) +
                                        static_cast<long>(d.faces)));
  // Trivalence: every edge lies on exactly two vertices, every face's
  // vertex count equals its edge count.
  std::map<std::pair<std::size_t, std::size_t>, int> edge_uses;
  std::vector<std::size_t> face_vertices(d.faces, 0);
  for (const auto& v : verts) {
    for (auto f : v) ++face_vertices[f];
    edge_uses[{v[0], v[1]}]++;
    edge_uses[{v[1], v[2]}]++;
    edge_uses[{v[0], v[2]}]++;
  }
  for (const auto& e : p.edges()) {
    const int uses = edge_uses[{e.a, e.b}];
    if (uses != 2)
      d.failures.push_back("edge " + name(e.a) + "-" + name(e.b) + " has " + std::to_string(uses) +
                           " endpoints (not trivalent)");
  }
  for (std::size_t f = 0; f < d.faces; ++f)
    if (face_vertices[f] != p.neighbors(f).size() || face_vertices[f] < 3)
      d.failures.push_back("face " + name(f) + " is not a proper polygon");
  if (2 * d.edges != 3 * d.vertices) d.failures.push_back("2E != 3V");
  for (const auto& v : verts) {
    const std::vector<int> ns{p.angle(v[0], v[1]), p.angle(v[1], v[2]), p.angle(v[0], v[2])};
    if (detail::reciprocal_sum_compare(ns, 1) <= 0)
      d.failures.push_back("vertex " + name(v[0]) + "/" + name(v[1]) + "/" + name(v[2]) +
                           ": angle sum not > pi");
  }
  for (const auto& c : find_prismatic_3_circuits(p)) {
    if (detail::reciprocal_sum_compare({c.angles[0], c.angles[1], c.angles[2]}, 1) >= 0)
      d.failures.push_back("prismatic 3-circuit " + name(c.faces[0]) + "/" + name(c.faces[1]) + "/" +
                           name(c.faces[2]) + ": angle sum not < pi");
  }
  // Prismatic 4-circuits: 4-cycles whose opposite faces are not adjacent.
  const std::size_t n = d.faces;
  std::set<std::array<std::size_t, 4>> seen;
  for (std::size_t a = 0; a < n; ++a)
    for (auto b : p.neighbors(a))
      for (auto c : p.neighbors(b)) {
        if (c == a || p.adjacent(a, c)) continue;
        for (auto e : p.neighbors(c)) {
          if (e == b || e == a || !p.adjacent(e, a) || p.adjacent(b, e)) continue;
          std::array<std::size_t, 4> key{a, b, c, e};
          std::sort(key.begin(), key.end());
          if (!seen.insert(key).second) continue;
          const std::vector<int> ns{p.angle(a, b), p.angle(b, c), p.angle(c, e), p.angle(e, a)};
          if (detail::reciprocal_sum_compare(ns, 2) >= 0)
            d.failures.push_back("prismatic 4-circuit " + name(a) + "/" + name(b) + "/" + name(c) + "/" +
                                 name(e) + ": angle sum not < 2pi");
        }
      }
  return d;
}

}  // namespace polymut
