// polymut: build, realize, mutate and compare Coxeter polyhedra.

#include <polymut/combinat.hpp>
#include <polymut/corpus.hpp>
#include <polymut/invariants.hpp>
#include <polymut/io.hpp>
#include <polymut/lorentz.hpp>
#include <polymut/table.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace polymut;

namespace {

struct Options {
  std::string input;
  int digits = 0;
  int maxlen = 12;
  std::string circuit;
  std::string upper;
  std::string format;
  std::string cache_dir = ".mhcache";
  std::string output;
  bool mutant = false;
  bool no_cache = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_out(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + o.output + "'");
  out << text;
}

bool is_pair_name(const std::string& s) {
  static const std::regex grammar("^(A|B|C)(A|B|C)([0-9]+)(m?)$");
  return std::regex_match(s, grammar);
}

/// What the positional argument named.
struct Input {
  std::string name;
  AngledPolyhedron poly;
  std::optional<RealizedPolyhedron> realized;
};

Input load(const std::string& arg, bool mutant = false) {
  Input in;
  if (!fs::exists(arg)) {
    if (!is_pair_name(arg) && arg.find_first_of("/.") == std::string::npos) {
      // Looks like a name but fails the grammar: report it as such.
      parse_pair_name(arg);
    }
    if (!is_pair_name(arg)) throw UsageError("no such file or pair name: '" + arg + "'");
    PairName n = parse_pair_name(arg);
    if (mutant) n.mutant = !n.mutant;
    in.name = n.str();
    in.poly = build_polyhedron(n);
    return in;
  }
  if (mutant) throw UsageError("--mutant applies to pair names; use 'mutate' for files");
  const std::string text = read_file(arg);
  in.name = fs::path(arg).stem().string();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    in.realized = io::read_archive(text);
    in.poly = in.realized->poly;
  } else {
    in.poly = parse_polyhedron(text);
  }
  return in;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << v;
  return s.str();
}

/// Cache entries are keyed by the combinatorics, the precision ladder, the
/// word-length cap and the solver seed.
class Cache {
 public:
  Cache(std::string dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

  std::string key(const std::string& kind, const std::string& name, const AngledPolyhedron& p, unsigned solve_digits,
                  unsigned digits, int maxlen, std::uint64_t seed) const {
    std::string safe;
    for (char c : name) safe += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return kind + "-" + safe + "-" + hex(fnv1a(format_polyhedron(p))) + "-s" + std::to_string(solve_digits) + "-d" +
           std::to_string(digits) + "-L" + std::to_string(maxlen) + "-seed" + hex(seed) + ".json";
  }

  std::optional<std::string> get(const std::string& key) const {
    if (!enabled_) return std::nullopt;
    const fs::path p = fs::path(dir_) / key;
    if (!fs::exists(p)) return std::nullopt;
    return read_file(p.string());
  }

  void put(const std::string& key, const std::string& text) const {
    if (!enabled_) return;
    fs::create_directories(dir_);
    const fs::path p = fs::path(dir_) / key;
    const fs::path tmp = p.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << text;
    }
    fs::rename(tmp, p);
  }

 private:
  std::string dir_;
  bool enabled_;
};

unsigned solve_digits(const Options& o) { return o.digits > 0 ? static_cast<unsigned>(o.digits) : 50; }

RealizedPolyhedron realized(const Input& in, unsigned digits) {
  if (!in.realized) return realize(in.poly, digits);
  if (in.realized->digits >= digits) return *in.realized;
  return refine(*in.realized, digits);
}

PrismaticCircuit choose_circuit(const AngledPolyhedron& p, const std::string& selection) {
  const auto all = find_prismatic_3_circuits(p);
  if (selection.empty()) {
    std::vector<PrismaticCircuit> eligible;
    for (const auto& c : all)
      if (c.eligible()) eligible.push_back(c);
    if (eligible.size() == 1) return eligible.front();
    if (eligible.empty()) throw IneligibleCircuit("no prismatic 3-circuit with equal angles");
    std::string list;
    for (const auto& c : eligible)
      list += "\n  " + p.face(c.faces[0]) + "," + p.face(c.faces[1]) + "," + p.face(c.faces[2]);
    throw UsageError("several eligible circuits; choose one with --circuit:" + list);
  }
  std::vector<std::size_t> idx;
  std::stringstream s(selection);
  std::string tok;
  while (std::getline(s, tok, ',')) {
    if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const std::size_t k = std::stoul(tok);
      if (k < 1 || k > p.num_faces()) throw UsageError("--circuit: face row " + tok + " out of range");
      idx.push_back(k - 1);
    } else {
      idx.push_back(p.index_of(tok));
    }
  }
  if (idx.size() != 3) throw UsageError("--circuit expects three faces");
  for (const auto& c : all) {
    std::array<std::size_t, 3> a = c.faces;
    std::array<std::size_t, 3> b{idx[0], idx[1], idx[2]};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return make_circuit(p, idx[0], idx[1], idx[2]);
  }
  throw UsageError("--circuit: faces do not form a prismatic 3-circuit");
}

std::string matrix_text(const AngledPolyhedron& p, const std::vector<std::vector<std::string>>& rows,
                        const std::string& format) {
  if (format == "json") {
    io::json j = {{"faces", p.faces()}, {"rows", rows}};
    return j.dump(2) + "\n";
  }
  std::string out = "face";
  for (const auto& f : p.faces()) out += "\t" + f;
  out += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += p.face(i);
    for (const auto& x : rows[i]) out += "\t" + x;
    out += "\n";
  }
  return out;
}

unsigned display_digits(const RealizedPolyhedron& r) { return std::min(r.digits, 30u); }

// ---------------------------------------------------------------------------
// Invariants with caching

struct Pipeline {
  const Options& opt;
  Cache cache;

  InvariantConfig config() const {
    InvariantConfig cfg;
    cfg.itf.recognition.digits = opt.digits > 0 ? static_cast<unsigned>(opt.digits) : 250;
    cfg.itf.max_len = opt.maxlen;
    return cfg;
  }

  /// Serialized report and the report itself; a cache hit returns the
  /// stored bytes untouched.
  std::pair<std::string, InvariantReport> run(const std::string& name, const Input& in) const {
    const InvariantConfig cfg = config();
    const std::string key = cache.key("report", name, in.poly, cfg.solve_digits, cfg.itf.recognition.digits,
                                      cfg.itf.max_len, cfg.itf.sampling.seed);
    if (auto hit = cache.get(key)) return {*hit, io::read_report(*hit, in.poly)};
    InvariantReport rep = in.realized ? compute_invariants(name, *in.realized, cfg) : compute_invariants(name, in.poly, cfg);
    std::string text = io::write_report(rep, in.poly);
    cache.put(key, text);
    return {text, rep};
  }
};

// ---------------------------------------------------------------------------
// Commands

int cmd_build(const Options& o) {
  const Input in = load(o.input, o.mutant);
  write_out(o, format_polyhedron(in.poly, in.name));
  return 0;
}

int cmd_validate(const Options& o) {
  const Input in = load(o.input);
  const Diagnostics d = validate(in.poly);
  std::ostringstream s;
  s << "faces " << d.faces << "\nedges " << d.edges << "\nvertices " << d.vertices << "\n";
  const auto circuits = find_prismatic_3_circuits(in.poly);
  for (const auto& c : circuits)
    s << "circuit " << in.poly.face(c.faces[0]) << "," << in.poly.face(c.faces[1]) << "," << in.poly.face(c.faces[2])
      << " angles " << c.angles[0] << "," << c.angles[1] << "," << c.angles[2]
      << (c.eligible() ? " eligible" : "") << "\n";
  for (const auto& f : d.failures) s << "fail " << f << "\n";
  s << (d.ok() ? "ok" : "invalid") << "\n";
  write_out(o, s.str());
  return d.ok() ? 0 : 1;
}

int cmd_realize(const Options& o) {
  const Input in = load(o.input);
  write_out(o, io::write_archive(realized(in, solve_digits(o))));
  return 0;
}

int cmd_refine(const Options& o) {
  const Input in = load(o.input);
  const unsigned digits = o.digits > 0 ? static_cast<unsigned>(o.digits) : 300;
  const RealizedPolyhedron base = in.realized ? *in.realized : realize(in.poly, 50u);
  write_out(o, io::write_archive(refine(base, digits)));
  return 0;
}

int cmd_gram(const Options& o) {
  const Input in = load(o.input);
  const RealizedPolyhedron r = realized(in, solve_digits(o));
  const GramMatrix G = gram(r);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : G) {
    rows.emplace_back();
    for (const auto& x : row) rows.back().push_back(o.format == "json" ? io::exact_decimal(x) : to_decimal(x, display_digits(r)));
  }
  write_out(o, matrix_text(in.poly, rows, o.format));
  return 0;
}

int cmd_vertices(const Options& o) {
  const Input in = load(o.input);
  const RealizedPolyhedron r = realized(in, solve_digits(o));
  const auto vs = vertices(r);
  if (o.format == "json") {
    io::json out = io::json::array();
    for (const auto& v : vs) {
      io::json pt = io::json::array();
      for (const auto& c : v.point) pt.push_back(io::exact_decimal(c));
      out.push_back({{"faces", io::faces_json(r.poly, {v.faces[0], v.faces[1], v.faces[2]})}, {"point", pt}});
    }
    write_out(o, out.dump(2) + "\n");
    return 0;
  }
  std::string s = "faces\tt\tx\ty\tz\n";
  for (const auto& v : vs) {
    s += r.poly.face(v.faces[0]) + "," + r.poly.face(v.faces[1]) + "," + r.poly.face(v.faces[2]);
    for (const auto& c : v.point) s += "\t" + to_decimal(c, display_digits(r));
    s += "\n";
  }
  write_out(o, s);
  return 0;
}

int cmd_mutate(const Options& o) {
  const Input in = load(o.input);
  const PrismaticCircuit c = choose_circuit(in.poly, o.circuit);
  if (in.realized) {
    write_out(o, io::write_archive(mutate_geometric(*in.realized, c)));
    return 0;
  }
  SideAssignment sides;
  if (!o.upper.empty()) {
    std::stringstream s(o.upper);
    std::string tok;
    std::vector<bool> up(in.poly.num_faces(), false);
    while (std::getline(s, tok, ',')) up[in.poly.index_of(tok)] = true;
    for (std::size_t f = 0; f < in.poly.num_faces(); ++f) {
      if (f == c.faces[0] || f == c.faces[1] || f == c.faces[2]) continue;
      (up[f] ? sides.upper : sides.lower).push_back(in.poly.face(f));
    }
  } else {
    sides = glued_sides(in.poly);
  }
  write_out(o, format_polyhedron(mutate_combinatorial(in.poly, c, sides), in.name + " mutated"));
  return 0;
}

int cmd_invariants(const Options& o) {
  const Input in = load(o.input);
  const Pipeline pipe{o, Cache(o.cache_dir, !o.no_cache)};
  const auto [text, rep] = pipe.run(in.name, in);
  if (o.format == "tsv")
    write_out(o, std::string(io::kTsvHeader) + "\n" + io::report_tsv(rep) + "\n");
  else
    write_out(o, text);
  return 0;
}

int cmd_export(const Options& o) {
  const Input in = load(o.input);
  if (o.format == "json") return cmd_invariants(o);
  if (!o.format.empty() && o.format != "off") throw UsageError("export supports --format off or json");
  write_out(o, io::off_mesh(realized(in, solve_digits(o))));
  return 0;
}

int cmd_table1(const Options& o) {
  const Pipeline pipe{o, Cache(o.cache_dir, !o.no_cache)};
  const unsigned digits = pipe.config().itf.recognition.digits;
  const ReportSource compute = [&](const CorpusEntry& e) {
    Input in;
    in.name = e.name.str();
    in.poly = build_polyhedron(e.name);
    return pipe.run(in.name, in).second;
  };
  const auto entries = corpus();
  std::ostringstream s;
  if (o.format == "json") {
    io::json rows = io::json::array();
    bool all = true;
    for (std::size_t k = 0; k + 1 < entries.size(); k += 2) {
      const RowComparison c = compare_row(entries[k], entries[k + 1], compute, digits);
      all = all && c.all_match();
      auto member = [](const MemberComparison& m) {
        return io::json{{"name", m.entry.name.str()},
                        {"itf", status_name(m.itf)},
                        {"integral_traces", status_name(m.integral)},
                        {"arithmetic", status_name(m.arithmetic)},
                        {"error", m.error}};
      };
      rows.push_back({{"pair", c.row.pair},
                      {"first", member(c.first)},
                      {"second", member(c.second)},
                      {"mutual_containment", status_name(c.mutual)},
                      {"verdict", c.verdict ? (c.verdict->distinguished() ? "Distinguished" : "Unknown") : "n/a"},
                      {"verdict_status", status_name(c.verdict_status)}});
    }
    write_out(o, rows.dump(2) + "\n");
    return all ? 0 : 1;
  }
  s << "pair\tmember\titf\tintegral_traces\tarithmetic\tmutual\tverdict\tverdict_status\tnote\n";
  bool all = true;
  for (std::size_t k = 0; k + 1 < entries.size(); k += 2) {
    const RowComparison c = compare_row(entries[k], entries[k + 1], compute, digits);
    all = all && c.all_match();
    for (const MemberComparison* m : {&c.first, &c.second}) {
      std::string note = m->error;
      if (note.empty() && m->report) note = io::annotation(*m->report);
      s << c.row.pair << "\t" << m->entry.name.str() << "\t" << status_name(m->itf) << "\t" << status_name(m->integral)
        << "\t" << status_name(m->arithmetic) << "\t" << status_name(c.mutual) << "\t"
        << (c.verdict ? (c.verdict->distinguished() ? "Distinguished" : "Unknown") : "n/a") << "\t"
        << status_name(c.verdict_status) << "\t" << note << "\n";
    }
    std::cout << s.str() << std::flush;
    s.str("");
  }
  std::cout << (all ? "all rows MATCH" : "some rows differ") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic Coxeter polyhedra: realization, mutation and commensurability invariants"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_input = true) {
    if (needs_input) sub->add_option("input", o.input, "pair name (e.g. BB4m), polyhedron file or realization archive")->required();
    sub->add_option("--digits", o.digits, "decimal digits (default 50 to solve, 250 to recognize)");
    sub->add_option("-o,--output", o.output, "write to a file instead of stdout");
  };

  auto* build = app.add_subcommand("build", "write the polyhedron in text format");
  add_common(build);
  build->add_flag("--mutant", o.mutant, "glue with the mutant offset");

  auto* val = app.add_subcommand("validate", "check the necessary conditions for a compact Coxeter polyhedron");
  add_common(val);

  auto* real = app.add_subcommand("realize", "solve for outward face normals; writes a realization archive");
  add_common(real);

  auto* ref = app.add_subcommand("refine", "Newton refinement of a realization (default 300 digits)");
  add_common(ref);

  auto* gr = app.add_subcommand("gram", "Gram matrix G_ij = 2<v_i, v_j>");
  add_common(gr);
  gr->add_option("--format", o.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  auto* vx = app.add_subcommand("vertices", "vertices as unit timelike points");
  add_common(vx);
  vx->add_option("--format", o.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  auto* mu = app.add_subcommand("mutate", "mutate along a prismatic 3-circuit (geometric for archives)");
  add_common(mu);
  mu->add_option("--circuit", o.circuit, "three faces i,j,k (ids or 1-based rows)");
  mu->add_option("--upper", o.upper, "faces on the fixed side, for polyhedra not built from halves");

  auto* inv = app.add_subcommand("invariants", "trace field, integral traces, quaternion algebra, arithmeticity");
  add_common(inv);
  inv->add_option("--maxlen", o.maxlen, "word-length cap")->capture_default_str();
  inv->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  inv->add_option("--cache-dir", o.cache_dir, "result cache")->capture_default_str();
  inv->add_flag("--no-cache", o.no_cache, "neither read nor write the cache");

  auto* tab = app.add_subcommand("table1", "compare the corpus against the reference table");
  add_common(tab, false);
  tab->add_option("--maxlen", o.maxlen, "word-length cap")->capture_default_str();
  tab->add_option("--format", o.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  tab->add_option("--cache-dir", o.cache_dir, "result cache")->capture_default_str();
  tab->add_flag("--no-cache", o.no_cache, "neither read nor write the cache");

  auto* ex = app.add_subcommand("export", "OFF mesh (Klein model) or JSON report");
  add_common(ex);
  ex->add_option("--format", o.format, "off or json")->check(CLI::IsMember({"off", "json"}));
  ex->add_option("--maxlen", o.maxlen, "word-length cap for json")->capture_default_str();
  ex->add_option("--cache-dir", o.cache_dir, "result cache")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(o);
    if (*val) return cmd_validate(o);
    if (*real) return cmd_realize(o);
    if (*ref) return cmd_refine(o);
    if (*gr) return cmd_gram(o);
    if (*vx) return cmd_vertices(o);
    if (*mu) return cmd_mutate(o);
    if (*inv) return cmd_invariants(o);
    if (*tab) return cmd_table1(o);
    if (*ex) return cmd_export(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const NameError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
