#pragma once

// Text format, one record per line:
//
//   physarum-lp v1
//   n m
//   <n lines of m decimals: rows of A>
//   <b: n decimals>
//   <c: m decimals>
//   <d: m decimals>
//
// '#' starts a comment running to end of line. A comment of the form
// "# name: <label>" sets the instance name. Numbers are written in shortest
// round-trip decimal form, so write-then-read reproduces every bit.

#include "physarum/problem.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace physarum {

inline constexpr std::string_view kProblemMagic = "physarum-lp v1";

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct DataLine {
  int line_no;
  std::vector<std::string_view> fields;
};

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] inline void parse_fail(int line_no, const std::string& msg) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + msg);
}

inline double parse_number(std::string_view tok, int line_no, std::size_t field) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto res = std::from_chars(first, tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "field " + std::to_string(field + 1) + ": cannot parse '" + std::string(tok) + "' as a decimal");
  }
  return v;
}

inline Index parse_dim(std::string_view tok, int line_no, std::size_t field) {
  long long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 1) {
    parse_fail(line_no, "field " + std::to_string(field + 1) + ": expected a positive integer, got '" + std::string(tok) + "'");
  }
  return static_cast<Index>(v);
}

inline Vector parse_row(const DataLine& line, Index expected, std::string_view what) {
  if (static_cast<Index>(line.fields.size()) != expected) {
    throw Error(ErrorCode::dimension_mismatch, "line " + std::to_string(line.line_no) + ": " + std::string(what) +
                                                   " has " + std::to_string(line.fields.size()) + " entries, expected " +
                                                   std::to_string(expected));
  }
  Vector v(expected);
  for (Index k = 0; k < expected; ++k) {
    v(k) = parse_number(line.fields[static_cast<std::size_t>(k)], line.line_no, static_cast<std::size_t>(k));
  }
  return v;
}

}  // namespace detail

/// Parses the text format. Structural problems raise parse_error or
/// dimension_mismatch; semantic ones (c <= 0, d <= 0, zero columns) raise
/// invalid_problem from PositiveLP's constructor.
inline PositiveLP parse_problem(std::string_view text) {
  std::vector<detail::DataLine> lines;
  std::string name;
  bool seen_magic = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!seen_magic) {
      if (detail::trim(raw) != kProblemMagic) {
        detail::parse_fail(line_no, "expected header '" + std::string(kProblemMagic) + "'");
      }
      seen_magic = true;
      continue;
    }
    std::string_view body = raw;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      const auto comment = detail::trim(raw.substr(hash + 1));
      if (comment.substr(0, 5) == "name:") name = std::string(detail::trim(comment.substr(5)));
      body = raw.substr(0, hash);
    }
    body = detail::trim(body);
    if (body.empty()) continue;
    lines.push_back({line_no, detail::split_fields(body)});
  }
  if (!seen_magic) detail::parse_fail(1, "empty input");
  if (lines.empty()) detail::parse_fail(line_no, "missing dimension line");

  const auto& dims = lines.front();
  if (dims.fields.size() != 2) detail::parse_fail(dims.line_no, "dimension line must be 'n m'");
  const Index n = detail::parse_dim(dims.fields[0], dims.line_no, 0);
  const Index m = detail::parse_dim(dims.fields[1], dims.line_no, 1);

  const auto expected_lines = static_cast<std::size_t>(1 + n + 3);
  if (lines.size() < expected_lines) {
    detail::parse_fail(lines.back().line_no, "truncated file: expected " + std::to_string(n) +
                                                 " matrix rows followed by b, c and d");
  }
  if (lines.size() > expected_lines) detail::parse_fail(lines[expected_lines].line_no, "unexpected trailing data");

  ProblemData data;
  data.name = name;
  data.A.resize(n, m);
  for (Index i = 0; i < n; ++i) {
    data.A.row(i) = detail::parse_row(lines[static_cast<std::size_t>(1 + i)], m, "row " + std::to_string(i + 1) + " of A").transpose();
  }
  data.b = detail::parse_row(lines[static_cast<std::size_t>(1 + n)], n, "b");
  data.c = detail::parse_row(lines[static_cast<std::size_t>(2 + n)], m, "c");
  data.d = detail::parse_row(lines[static_cast<std::size_t>(3 + n)], m, "d");
  return PositiveLP(std::move(data));
}

inline std::string format_problem(const PositiveLP& lp) {
  std::ostringstream out;
  auto row = [&out](const auto& v) {
    for (Index k = 0; k < v.size(); ++k) out << (k ? " " : "") << format_number(v(k));
    out << '\n';
  };
  out << kProblemMagic << '\n';
  if (!lp.name().empty()) out << "# name: " << lp.name() << '\n';
  out << lp.rows() << ' ' << lp.cols() << '\n';
  out << "# A\n";
  for (Index i = 0; i < lp.rows(); ++i) row(lp.A().row(i));
  out << "# b\n";
  row(lp.b());
  out << "# c\n";
  row(lp.c());
  out << "# d\n";
  row(lp.d());
  return out.str();
}

inline PositiveLP read_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

inline void write_problem(const PositiveLP& lp, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  out << format_problem(lp);
  if (!out) throw Error(ErrorCode::invalid_argument, "write to '" + path + "' failed");
}

}  // namespace physarum
