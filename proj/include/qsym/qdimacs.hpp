#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsym/instance.hpp"

namespace qsym {

/// Parses QDIMACS text into a normalized instance.
///
/// Adjacent blocks with the same quantifier are merged, duplicate literals
/// are dropped and tautological clauses are removed. Matrix variables missing
/// from the prefix are bound in an outermost ∃ block and listed in
/// `free_variables`. A header/clause-count mismatch is recorded in
/// `warnings`, not raised. Syntax errors throw ParseError with line and
/// column.
QbfInstance parse_qdimacs(std::string_view text);

/// Deterministic QDIMACS text: header, one line per quantifier block, one
/// line per clause, each line terminated by '\n'. Comments are emitted first
/// as "c ..." lines.
std::string serialize_qdimacs(const QbfInstance& instance);

/// Cube sidecar for a universal breaker:
///
///   p dnf <vars> <cubes>
///   a 1 2 0            quantifier lines as in QDIMACS
///   e 3 0
///   1 -3 0             one cube per line
///
/// `<vars>` is the largest variable id of the prefix or the cubes unless a
/// larger `num_vars` is given. Throws ValidationError when a cube mentions an
/// unquantified variable.
std::string serialize_dnf(const Prefix& prefix, std::span<const Cube> cubes,
                          Var num_vars = 0);

struct DnfSidecar {
  Var num_vars = 0;
  Prefix prefix;
  std::vector<Cube> cubes;
};

/// Inverse of serialize_dnf. Unsatisfiable cubes are dropped.
DnfSidecar parse_dnf(std::string_view text);

/// Reads a whole file, or standard input for "-". Throws Error(Input) when
/// the file cannot be opened.
std::string read_text(const std::string& path);

}  // namespace qsym
