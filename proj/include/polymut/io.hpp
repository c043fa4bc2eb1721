#pragma once

// Serialization: realization archives (JSON, lossless), invariant reports
// (JSON and a tab-separated row), and OFF meshes for plotting.

#include <polymut/combinat.hpp>
#include <polymut/invariants.hpp>
#include <polymut/lorentz.hpp>
#include <polymut/multiprecision.hpp>

#include <json.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymut::io {

using json = nlohmann::ordered_json;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kArchiveFormat = "polymut-realization";
inline constexpr const char* kReportFormat = "polymut-report";

/// Shortest decimal string that reads back to exactly `x` at its precision.
inline std::string exact_decimal(const Real& x) {
  if (x == 0) return "0";
  mpfr_exp_t exp = 0;
  std::unique_ptr<char, void (*)(char*)> s(mpfr_get_str(nullptr, &exp, 10, 0, x.backend().data(), MPFR_RNDN),
                                           mpfr_free_str);
  std::string digits(s.get());
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // 0.d1d2... × 10^exp  ->  d1.d2... e(exp − 1)
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(static_cast<long>(exp) - 1);
  return out;
}

/// Reads a decimal string at `bits` bits of precision.
inline Real parse_real(const std::string& s, unsigned bits) {
  Real r;
  r.precision(std::max(1u, static_cast<unsigned>(bits * 0.30103)));
  mpfr_set_prec(r.backend().data(), static_cast<mpfr_prec_t>(bits));
  if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) throw FormatError("not a decimal number: '" + s + "'");
  return r;
}

inline unsigned bits_of(const Real& x) { return static_cast<unsigned>(mpfr_get_prec(x.backend().data())); }

inline json integer_list(const IntPoly& p) {
  json out = json::array();
  for (std::size_t i = p.coeffs.size(); i-- > 0;) out.push_back(p.coeffs[i].str());
  return out;
}

inline IntPoly poly_from_json(const json& j) {
  std::vector<Integer> asc;
  for (auto it = j.rbegin(); it != j.rend(); ++it) asc.emplace_back(it->get<std::string>());
  return IntPoly::primitive(std::move(asc));
}

/// Descending coefficients joined by commas, the reference table's layout.
inline std::string coefficient_list(const IntPoly& p) {
  std::string out;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) {
    out += p.coeffs[i].str();
    if (i > 0) out += ",";
  }
  return out;
}

/// "a+bi" with `places` digits after the point.
inline std::string complex_text(const Complex& z, int places = 16) {
  auto fixed = [&](const Real& x) { return x.str(places, std::ios_base::fixed); };
  std::string im = fixed(z.im);
  if (im[0] != '-') im = "+" + im;
  return fixed(z.re) + im + "i";
}

inline json complex_json(const Complex& z) { return {{"re", exact_decimal(z.re)}, {"im", exact_decimal(z.im)}}; }

inline Complex complex_from_json(const json& j, unsigned bits) {
  return Complex(parse_real(j.at("re").get<std::string>(), bits), parse_real(j.at("im").get<std::string>(), bits));
}

// ---------------------------------------------------------------------------
// Realization archive

inline json archive_json(const RealizedPolyhedron& r) {
  json normals = json::array();
  unsigned bits = 0;
  for (const auto& v : r.normals) {
    json row = json::array();
    for (const auto& c : v) {
      row.push_back(exact_decimal(c));
      bits = std::max(bits, bits_of(c));
    }
    normals.push_back(std::move(row));
  }
  return {{"format", kArchiveFormat},
          {"version", 1},
          {"combinatorics", format_polyhedron(r.poly)},
          {"digits", r.digits},
          {"precision_bits", bits},
          {"normals", std::move(normals)},
          {"residual", r.residual.str(6, std::ios_base::scientific)},
          {"gauge", r.gauge},
          {"solver_seed", r.seed},
          {"restart", r.restart}};
}

inline std::string write_archive(const RealizedPolyhedron& r) { return archive_json(r).dump(2) + "\n"; }

inline RealizedPolyhedron read_archive(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("archive is not JSON: ") + e.what());
  }
  if (j.value("format", "") != kArchiveFormat) throw FormatError("not a realization archive");
  RealizedPolyhedron r;
  try {
    r.poly = parse_polyhedron(j.at("combinatorics").get<std::string>());
    r.digits = j.at("digits").get<unsigned>();
    const unsigned bits = j.at("precision_bits").get<unsigned>();
    for (const auto& row : j.at("normals")) {
      if (row.size() != 4) throw FormatError("normal rows need 4 entries");
      Vec4 v;
      for (std::size_t c = 0; c < 4; ++c) v[c] = parse_real(row[c].get<std::string>(), bits);
      r.normals.push_back(std::move(v));
    }
    r.gauge = j.at("gauge").get<std::string>();
    r.seed = j.at("solver_seed").get<std::uint64_t>();
    r.restart = j.value("restart", -1);
  } catch (const json::exception& e) {
    throw FormatError(std::string("archive field: ") + e.what());
  }
  if (r.normals.size() != r.poly.num_faces()) throw FormatError("archive has a normal count different from the face count");
  PrecisionGuard guard(r.digits + 20);
  r.residual = detail::max_residual(r.poly, r.normals);
  return r;
}

// ---------------------------------------------------------------------------
// OFF mesh

/// Vertices in the Klein model (spatial part over p_t); each face lists its
/// vertices in order, counter-clockwise seen from outside.
inline std::string off_mesh(const RealizedPolyhedron& r) {
  const auto verts = vertices(r);
  std::vector<std::array<double, 3>> pts;
  for (const auto& v : verts) {
    PrecisionGuard guard(r.digits + 20);
    std::array<double, 3> k;
    for (std::size_t c = 0; c < 3; ++c) {
      k[c] = (v.point[c + 1] / v.point[0]).convert_to<double>();
      if (std::abs(k[c]) < 1e-30) k[c] = 0;  // no "-0" or solver noise in the file
    }
    pts.push_back(k);
  }
  std::array<double, 3> centre{0, 0, 0};
  for (const auto& p : pts)
    for (int k = 0; k < 3; ++k) centre[k] += p[k] / static_cast<double>(pts.size());

  auto shares_edge = [&](std::size_t a, std::size_t b) {
    int common = 0;
    for (auto f : verts[a].faces)
      for (auto g : verts[b].faces) common += f == g;
    return common == 2;
  };

  std::vector<std::vector<std::size_t>> faces;
  for (std::size_t f = 0; f < r.poly.num_faces(); ++f) {
    std::vector<std::size_t> on;
    for (std::size_t k = 0; k < verts.size(); ++k)
      if (std::find(verts[k].faces.begin(), verts[k].faces.end(), f) != verts[k].faces.end()) on.push_back(k);
    std::vector<std::size_t> cycle{on.front()};
    std::vector<bool> used(on.size(), false);
    used[0] = true;
    while (cycle.size() < on.size()) {
      bool step = false;
      for (std::size_t k = 0; k < on.size() && !step; ++k)
        if (!used[k] && shares_edge(cycle.back(), on[k])) {
          used[k] = true;
          cycle.push_back(on[k]);
          step = true;
        }
      if (!step) throw std::runtime_error("off_mesh: face '" + r.poly.face(f) + "' is not a cycle");
    }
    const auto& a = pts[cycle[0]];
    const auto& b = pts[cycle[1]];
    const auto& c = pts[cycle[2]];
    const std::array<double, 3> u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const std::array<double, 3> w{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const std::array<double, 3> n{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    const double out = n[0] * (a[0] - centre[0]) + n[1] * (a[1] - centre[1]) + n[2] * (a[2] - centre[2]);
    if (out < 0) std::reverse(cycle.begin(), cycle.end());
    faces.push_back(std::move(cycle));
  }

  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(17);
  s << "OFF\n" << pts.size() << " " << faces.size() << " " << r.poly.edges().size() << "\n";
  for (const auto& p : pts) s << p[0] << " " << p[1] << " " << p[2] << "\n";
  for (const auto& f : faces) {
    s << f.size();
    for (auto k : f) s << " " << k;
    s << "\n";
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Invariant reports

inline json faces_json(const AngledPolyhedron& p, std::initializer_list<std::size_t> idx) {
  json out = json::array();
  for (auto i : idx) out.push_back(p.face(i));
  return out;
}

inline std::string annotation(const InvariantReport& r) {
  if (r.arithmetic.value_or(false)) return "Arithmetic";
  return r.integral_traces() ? "Integral traces" : "Non-integral trace";
}

/// `poly` supplies face names for the witnesses.
inline json report_json(const InvariantReport& r, const AngledPolyhedron& poly) {
  json itf_j;
  itf_j["degree"] = r.itf.degree();
  if (r.itf.primitive) {
    itf_j["poly"] = integer_list(r.itf.primitive->minpoly);
    itf_j["poly_text"] = r.itf.primitive->minpoly.to_string();
    itf_j["root"] = complex_text(r.itf.primitive->approx);
    itf_j["root_exact"] = complex_json(r.itf.primitive->approx);
  } else {
    itf_j["poly"] = nullptr;
    itf_j["poly_text"] = nullptr;
    itf_j["root"] = nullptr;
    itf_j["root_exact"] = nullptr;
  }
  unsigned bits = 0;
  json basis = json::array();
  for (const auto& b : r.itf.basis) {
    bits = std::max({bits, bits_of(b.trace.re), bits_of(b.trace.im)});
    basis.push_back({{"element", b.element}, {"trace", complex_json(b.trace)}});
  }
  itf_j["precision_bits"] = bits;
  itf_j["basis"] = std::move(basis);

  json witnesses = json::array();
  for (const auto& w : r.traces.witnesses)
    witnesses.push_back({{"faces", faces_json(poly, {w.i, w.j})}, {"minpoly", w.minpoly.to_string()}});
  json certificates = json::array();
  for (const auto& c : r.traces.certificates)
    certificates.push_back({{"faces", faces_json(poly, {c.i, c.j})}, {"minpoly", integer_list(c.minpoly)}});

  json iqa = nullptr;
  if (r.iqa) iqa = {{"symbol", {r.iqa->a, r.iqa->b}}, {"witness", faces_json(poly, {r.iqa->witness[0], r.iqa->witness[1], r.iqa->witness[2]})}};

  const auto& p = r.provenance;
  return {{"format", kReportFormat},
          {"name", r.name},
          {"itf", std::move(itf_j)},
          {"integral_traces", r.integral_traces()},
          {"witnesses", std::move(witnesses)},
          {"certificates", std::move(certificates)},
          {"iqa", std::move(iqa)},
          {"arithmetic", r.arithmetic ? json(*r.arithmetic) : json(nullptr)},
          {"annotation", annotation(r)},
          {"provenance",
           {{"solve_digits", p.solve_digits},
            {"digits", p.digits},
            {"max_len", p.max_len},
            {"samples", p.samples},
            {"rounds", p.rounds},
            {"stable_rounds", p.stable_rounds},
            {"seed", p.seed}}}};
}

inline std::string write_report(const InvariantReport& r, const AngledPolyhedron& poly) {
  return report_json(r, poly).dump(2) + "\n";
}

/// Inverse of report_json; `poly` resolves face names back to indices.
inline InvariantReport read_report(const std::string& text, const AngledPolyhedron& poly) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("report is not JSON: ") + e.what());
  }
  if (j.value("format", "") != kReportFormat) throw FormatError("not an invariant report");
  InvariantReport r;
  try {
    r.name = j.at("name").get<std::string>();
    const json& f = j.at("itf");
    const unsigned bits = f.at("precision_bits").get<unsigned>();
    for (const auto& b : f.at("basis"))
      r.itf.basis.push_back({b.at("element").get<Word>(), complex_from_json(b.at("trace"), bits)});
    if (!f.at("poly").is_null()) {
      r.itf.primitive = make_algebraic(poly_from_json(f.at("poly")), complex_from_json(f.at("root_exact"), bits));
    }
    const auto& p = j.at("provenance");
    r.provenance = {p.at("solve_digits").get<unsigned>(), p.at("digits").get<unsigned>(), p.at("max_len").get<int>(),
                    p.at("samples").get<std::size_t>(),  p.at("rounds").get<int>(),     p.at("stable_rounds").get<int>(),
                    p.at("seed").get<std::uint64_t>()};
    r.itf.digits = static_cast<unsigned>(bits * 0.30103);
    r.itf.rounds = r.provenance.rounds;
    r.itf.stable_rounds = r.provenance.stable_rounds;
    r.itf.samples = r.provenance.samples;
    r.itf.max_len_reached = 2 + 2 * r.provenance.rounds;
    r.traces.integral = j.at("integral_traces").get<bool>();
    for (const auto& c : j.at("certificates")) {
      GramCertificate g{poly.index_of(c.at("faces")[0].get<std::string>()),
                        poly.index_of(c.at("faces")[1].get<std::string>()), poly_from_json(c.at("minpoly"))};
      if (!is_algebraic_integer(g.minpoly)) r.traces.witnesses.push_back(g);
      r.traces.certificates.push_back(std::move(g));
    }
    if (!j.at("iqa").is_null()) {
      const auto& q = j.at("iqa");
      HilbertSymbol h;
      h.a = q.at("symbol")[0].get<int>();
      h.b = q.at("symbol")[1].get<int>();
      for (std::size_t k = 0; k < 3; ++k) h.witness[k] = poly.index_of(q.at("witness")[k].get<std::string>());
      r.iqa = h;
    }
    if (!j.at("arithmetic").is_null()) r.arithmetic = j.at("arithmetic").get<bool>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("report field: ") + e.what());
  }
  return r;
}

inline constexpr const char* kTsvHeader = "pair\tcoefficients\troot\tdegree\tintegral_traces\tarithmetic\tannotation";

/// One row shaped like the reference table.
inline std::string report_tsv(const InvariantReport& r) {
  std::string row = r.name + "\t";
  if (r.itf.primitive) {
    row += coefficient_list(r.itf.primitive->minpoly) + "\t" + complex_text(r.itf.primitive->approx);
  } else {
    row += "-\t-";
  }
  row += "\t" + std::to_string(r.itf.degree());
  row += std::string("\t") + (r.integral_traces() ? "true" : "false");
  row += std::string("\t") + (r.arithmetic ? (*r.arithmetic ? "true" : "false") : "n/a");
  row += "\t" + annotation(r);
  return row;
}

}  // namespace polymut::io
