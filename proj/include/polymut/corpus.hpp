#pragma once

// The named corpus: shipped half-polyhedron templates, pair names such as
// "BB4m", and the reference data each pair is checked against.

#include <polymut/combinat.hpp>
#include <polymut/multiprecision.hpp>
#include <polymut/polynomial.hpp>
#include <polymut/template_data.hpp>

#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymut {

struct NameError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const char* template_text(HalfKind kind) {
  switch (kind) {
    case HalfKind::A: return data::kTemplateA;
    case HalfKind::B: return data::kTemplateB;
    case HalfKind::C: return data::kTemplateC;
  }
  throw std::invalid_argument("template_text: bad kind");
}

/// A and B exist only for q in {4, 5}: their top vertices carry a π/3 next
/// to a π/q. C exists for every q >= 4.
inline bool admissible_q(HalfKind kind, int q) {
  if (kind == HalfKind::C) return q >= 4;
  return q == 4 || q == 5;
}

inline HalfTemplate build_half(HalfKind kind, int q) {
  if (!admissible_q(kind, q))
    throw AngleOutOfRange(std::string("half ") + kind_letter(kind) + " is not realizable with q = " +
                          std::to_string(q));
  return parse_template(template_text(kind), kind, q);
}

struct PairName {
  HalfKind first = HalfKind::A;
  HalfKind second = HalfKind::A;
  int q = 0;
  bool mutant = false;

  std::string str() const {
    return std::string(1, kind_letter(first)) + kind_letter(second) + std::to_string(q) + (mutant ? "m" : "");
  }
  /// Name of the pair's unmutated member.
  std::string base() const {
    PairName b = *this;
    b.mutant = false;
    return b.str();
  }
};

inline PairName parse_pair_name(const std::string& name) {
  static const std::regex grammar("^(A|B|C)(A|B|C)([0-9]+)(m?)$");
  std::smatch m;
  if (!std::regex_match(name, m, grammar)) throw NameError("not a pair name: '" + name + "'");
  PairName p;
  p.first = kind_from_letter(m[1].str()[0]);
  p.second = kind_from_letter(m[2].str()[0]);
  try {
    p.q = std::stoi(m[3].str());
  } catch (const std::out_of_range&) {
    throw NameError("q out of range in '" + name + "'");
  }
  p.mutant = m[4].length() == 1;
  return p;
}

/// Upper half `first`, lower half `second`; the mutant glues at offset 1.
inline AngledPolyhedron build_polyhedron(const PairName& n) {
  return glue(build_half(n.first, n.q), build_half(n.second, n.q), n.mutant ? 1 : 0);
}

inline AngledPolyhedron build_polyhedron(const std::string& name) { return build_polyhedron(parse_pair_name(name)); }

/// One row of the reference table.
struct TableRow {
  std::string pair;
  IntPoly poly;
  /// Root as printed, "a+bi".
  std::string root_text;
  std::string first_note;
  std::string second_note;
  /// The printed root carries an unexplained mark.
  bool marked = false;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Splits "a+bi" / "a-bi" into its parts at the current precision.
inline Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty() || s.back() != 'i') return Complex(Real(s));
  s.pop_back();
  std::size_t cut = std::string::npos;
  for (std::size_t k = 1; k < s.size(); ++k)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') cut = k;
  if (cut == std::string::npos) return Complex(Real(0), Real(s));
  return Complex(Real(s.substr(0, cut)), Real(s.substr(cut)));
}

inline std::vector<TableRow> parse_table(const std::string& text) {
  std::vector<TableRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_tabs(line);
    if (f.size() < 5) throw ParseError(lineno, "expected at least 5 tab-separated fields");
    TableRow r;
    r.pair = f[0];
    std::vector<long long> desc;
    std::istringstream cs(f[1]);
    std::string c;
    while (std::getline(cs, c, ',')) desc.push_back(std::stoll(c));
    r.poly = IntPoly::from_descending(desc);
    r.root_text = f[2];
    r.first_note = f[3];
    r.second_note = f[4];
    r.marked = f.size() > 5 && f[5] == "*";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline const std::vector<TableRow>& reference_table() {
  static const std::vector<TableRow> rows = parse_table(data::kTable1);
  return rows;
}

/// Root of the row's polynomial nearest the printed value, polished at
/// `digits`.
inline Complex table_root(const TableRow& row, unsigned digits) {
  PrecisionGuard guard(digits + 20);
  return newton_polish(row.poly, parse_complex(row.root_text));
}

struct CorpusEntry {
  PairName name;
  /// Reference field (shared by both members of the pair).
  std::optional<TableRow> expected;
  bool expected_integral = false;
  bool expected_arithmetic = false;
};

namespace detail {

inline bool note_integral(const std::string& note) {
  return note == "Arithmetic" || note == "Integral traces" || note == "Integral Traces";
}

}  // namespace detail

/// The 30 polyhedra in table order, each pair followed by its mutant. Rows
/// without an integral-traces comment have non-integral traces.
inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (const auto& row : reference_table()) {
    for (bool mutant : {false, true}) {
      CorpusEntry e;
      e.name = parse_pair_name(row.pair);
      e.name.mutant = mutant;
      e.expected = row;
      const std::string& note = mutant ? row.second_note : row.first_note;
      e.expected_integral = detail::note_integral(note);
      e.expected_arithmetic = note == "Arithmetic";
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline std::optional<CorpusEntry> find_corpus_entry(const std::string& name) {
  for (auto& e : corpus())
    if (e.name.str() == name) return e;
  return std::nullopt;
}

}  // namespace polymut
