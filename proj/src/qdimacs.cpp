#include "qsym/qdimacs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "qsym/error.hpp"

namespace qsym {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

long long to_int(const Token& token, std::size_t line) {
  long long value = 0;
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value > 2147483647LL || value < -2147483647LL)
    throw ParseError(line, token.column, "expected an integer, got '" + std::string(token.text) + "'");
  return value;
}

/// Shared reader for QDIMACS ("cnf") and the cube sidecar ("dnf").
struct RawProblem {
  Var declared_vars = 0;
  std::size_t declared_rows = 0;
  std::vector<QuantifierBlock> blocks;
  std::vector<std::vector<Literal>> rows;
  std::vector<std::string> comments;
  std::vector<std::string> warnings;
  Var max_var = 0;
};

RawProblem read_problem(std::string_view text, std::string_view format) {
  RawProblem raw;
  bool have_header = false;
  bool in_matrix = false;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  std::vector<bool> quantified;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tokens = split(line);
    if (tokens.empty()) continue;
    const std::string_view head = tokens.front().text;

    if (head == "c") {
      const std::size_t start = tokens.front().column;  // 1-based column of 'c'
      std::string_view rest = line.substr(std::min(line.size(), start));
      if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      raw.comments.emplace_back(rest);
      continue;
    }
    if (head == "p") {
      if (have_header) throw ParseError(line_no, 1, "duplicate problem line");
      if (tokens.size() != 4 || tokens[1].text != format)
        throw ParseError(line_no, 1, "expected 'p " + std::string(format) + " <vars> <count>'");
      const long long vars = to_int(tokens[2], line_no);
      const long long rows = to_int(tokens[3], line_no);
      if (vars < 0) throw ParseError(line_no, tokens[2].column, "negative variable count");
      if (rows < 0) throw ParseError(line_no, tokens[3].column, "negative count");
      raw.declared_vars = Var(vars);
      raw.declared_rows = std::size_t(rows);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, 1, "missing problem line");

    if (head == "a" || head == "e") {
      if (in_matrix)
        throw ParseError(line_no, 1, "quantifier line after the first matrix line");
      QuantifierBlock block{head == "a" ? Quantifier::Forall : Quantifier::Exists, {}};
      bool terminated = false;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const long long value = to_int(tokens[i], line_no);
        if (terminated)
          throw ParseError(line_no, tokens[i - 1].column,
                           "variable 0 inside a quantifier line");
        if (value == 0) {
          terminated = true;
          continue;
        }
        if (value < 0)
          throw ParseError(line_no, tokens[i].column, "negative variable in quantifier line");
        const Var v = Var(value);
        if (static_cast<std::size_t>(v) >= quantified.size()) quantified.resize(v + 1, false);
        if (quantified[v])
          throw ParseError(line_no, tokens[i].column,
                           "variable " + std::to_string(v) + " quantified twice");
        quantified[v] = true;
        raw.max_var = std::max(raw.max_var, v);
        block.variables.push_back(v);
      }
      if (!terminated) throw ParseError(line_no, line.size() + 1, "quantifier line must end with 0");
      if (!block.variables.empty()) raw.blocks.push_back(std::move(block));
      continue;
    }

    in_matrix = true;
    for (const auto& token : tokens) {
      const long long value = to_int(token, line_no);
      if (value == 0) {
        raw.rows.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      if (pending.empty()) pending_line = line_no;
      const Literal lit(static_cast<int>(value));
      raw.max_var = std::max(raw.max_var, lit.var());
      pending.push_back(lit);
    }
  }

  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing problem line");
  if (!pending.empty()) {
    raw.warnings.push_back("last " + std::string(format == "cnf" ? "clause" : "cube") +
                           " (line " + std::to_string(pending_line) +
                           ") lacks a terminating 0");
    raw.rows.push_back(std::move(pending));
  }
  if (raw.rows.size() != raw.declared_rows)
    raw.warnings.push_back("header declares " + std::to_string(raw.declared_rows) + " " +
                           (format == "cnf" ? "clauses" : "cubes") + ", found " +
                           std::to_string(raw.rows.size()));
  if (raw.max_var > raw.declared_vars)
    raw.warnings.push_back("variable " + std::to_string(raw.max_var) +
                           " exceeds the declared count " + std::to_string(raw.declared_vars));
  return raw;
}

void write_prefix(std::ostringstream& out, const Prefix& prefix) {
  for (const auto& block : prefix.blocks()) {
    out << (block.quantifier == Quantifier::Forall ? 'a' : 'e');
    for (Var v : block.variables) out << ' ' << v;
    out << " 0\n";
  }
}

void write_rows(std::ostringstream& out, std::span<const std::vector<Literal>> rows) {
  for (const auto& row : rows) {
    for (Literal l : row) out << l.dimacs() << ' ';
    out << "0\n";
  }
}

}  // namespace

QbfInstance parse_qdimacs(std::string_view text) {
  RawProblem raw = read_problem(text, "cnf");
  QbfInstance instance;
  instance.comments = std::move(raw.comments);
  instance.warnings = std::move(raw.warnings);
  instance.num_vars = std::max(raw.declared_vars, raw.max_var);

  std::size_t tautologies = 0;
  for (auto& row : raw.rows) {
    auto clause = normalize_clause(row);
    if (!clause) {
      ++tautologies;
      continue;
    }
    instance.matrix.push_back(std::move(*clause));
  }
  if (tautologies > 0)
    instance.warnings.push_back("dropped " + std::to_string(tautologies) +
                                " tautological clause(s)");

  Prefix declared(raw.blocks);
  std::vector<Var> free;
  for (const auto& clause : instance.matrix)
    for (Literal l : clause)
      if (!declared.contains(l.var())) free.push_back(l.var());
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());

  if (free.empty()) {
    instance.prefix = std::move(declared);
  } else {
    std::vector<QuantifierBlock> blocks{{Quantifier::Exists, free}};
    blocks.insert(blocks.end(), declared.blocks().begin(), declared.blocks().end());
    instance.prefix = Prefix(std::move(blocks));
    instance.free_variables = free;
    std::string list;
    for (Var v : free) list += " " + std::to_string(v);
    instance.warnings.push_back("free variable(s) bound existentially:" + list);
  }
  return instance;
}

std::string serialize_qdimacs(const QbfInstance& instance) {
  std::ostringstream out;
  for (const auto& comment : instance.comments) out << "c " << comment << '\n';
  out << "p cnf " << instance.num_vars << ' ' << instance.matrix.size() << '\n';
  write_prefix(out, instance.prefix);
  write_rows(out, instance.matrix);
  return out.str();
}

std::string serialize_dnf(const Prefix& prefix, std::span<const Cube> cubes, Var num_vars) {
  Var vars = std::max(num_vars, prefix.max_var());
  for (const auto& cube : cubes)
    for (Literal l : cube) {
      if (!prefix.contains(l.var()))
        throw ValidationError("cube variable " + std::to_string(l.var()) + " is not quantified");
      vars = std::max(vars, l.var());
    }
  std::ostringstream out;
  out << "p dnf " << vars << ' ' << cubes.size() << '\n';
  write_prefix(out, prefix);
  write_rows(out, cubes);
  return out.str();
}

DnfSidecar parse_dnf(std::string_view text) {
  RawProblem raw = read_problem(text, "dnf");
  DnfSidecar sidecar;
  sidecar.num_vars = std::max(raw.declared_vars, raw.max_var);
  sidecar.prefix = Prefix(raw.blocks);
  for (auto& row : raw.rows) {
    for (Literal l : row)
      if (!sidecar.prefix.contains(l.var()))
        throw ValidationError("cube variable " + std::to_string(l.var()) + " is not quantified");
    if (auto cube = normalize_cube(row)) sidecar.cubes.push_back(std::move(*cube));
  }
  return sidecar;
}

std::string read_text(const std::string& path) {
  if (path == "-")
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace qsym
