#pragma once

// Reproduction of the reference table: each pair's invariants are compared
// with the transcribed polynomial, root and annotations.

#include <polymut/corpus.hpp>
#include <polymut/invariants.hpp>

#include <functional>
#include <optional>
#include <string>

namespace polymut {

enum class Status { Match, Mismatch, Indeterminate };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Match: return "MATCH";
    case Status::Mismatch: return "MISMATCH";
    case Status::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

struct MemberComparison {
  CorpusEntry entry;
  std::optional<InvariantReport> report;
  /// Set when the pipeline failed.
  std::string error;
  Status itf = Status::Indeterminate;
  Status integral = Status::Indeterminate;
  Status arithmetic = Status::Indeterminate;
};

struct RowComparison {
  TableRow row;
  MemberComparison first;
  MemberComparison second;
  Status mutual = Status::Indeterminate;
  std::optional<Verdict> verdict;
  bool expect_distinguished = false;
  Status verdict_status = Status::Indeterminate;

  bool all_match() const {
    for (Status s : {first.itf, first.integral, first.arithmetic, second.itf, second.integral, second.arithmetic, mutual,
                     verdict_status})
      if (s != Status::Match) return false;
    return true;
  }
};

/// Degree equality plus containment of the table root, polished on the table
/// polynomial, in the computed field.
inline Status itf_status(const InvariantReport& r, const TableRow& row, unsigned digits) {
  if (r.itf.degree() != row.poly.degree()) return Status::Mismatch;
  const AlgebraicNumber root = make_algebraic(row.poly, table_root(row, 2 * digits + 20));
  return itf_contains(r.itf, root.source(), digits) ? Status::Match : Status::Mismatch;
}

using ReportSource = std::function<InvariantReport(const CorpusEntry&)>;

namespace detail {

inline MemberComparison compare_member(const CorpusEntry& e, const ReportSource& compute, unsigned digits) {
  MemberComparison m;
  m.entry = e;
  try {
    m.report = compute(e);
  } catch (const std::exception& ex) {
    m.error = ex.what();
    return m;
  }
  const InvariantReport& r = *m.report;
  if (e.expected) m.itf = itf_status(r, *e.expected, digits);
  m.integral = r.integral_traces() == e.expected_integral ? Status::Match : Status::Mismatch;
  if (r.arithmetic)
    m.arithmetic = *r.arithmetic == e.expected_arithmetic ? Status::Match : Status::Mismatch;
  else if (!e.expected_arithmetic)
    m.arithmetic = Status::Match;
  return m;
}

}  // namespace detail

/// `first` and `second` are the corpus entries of one row (P and its mutant).
inline RowComparison compare_row(const CorpusEntry& first, const CorpusEntry& second, const ReportSource& compute,
                                 unsigned digits) {
  RowComparison c;
  c.row = *first.expected;
  c.first = detail::compare_member(first, compute, digits);
  c.second = detail::compare_member(second, compute, digits);
  c.expect_distinguished = first.expected_integral != second.expected_integral;
  if (c.first.report && c.second.report) {
    c.mutual = same_field(c.first.report->itf, c.second.report->itf, digits) ? Status::Match : Status::Mismatch;
    c.verdict = commensurability_verdict(*c.first.report, *c.second.report, digits);
    c.verdict_status = c.verdict->distinguished() == c.expect_distinguished ? Status::Match : Status::Mismatch;
  }
  return c;
}

}  // namespace polymut
