#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "amc/ast.hpp"
#include "amc/diag.hpp"

namespace amc {

struct ParseResult {
  std::optional<SystemSpec> spec;
  Diagnostics diags;
  bool ok() const { return spec.has_value(); }
};

struct FormulaParseResult {
  std::optional<FormulaAst> formula;
  Diagnostics diags;
  bool ok() const { return formula.has_value(); }
};

// Parses .amas source. On success the SystemSpec preserves source order of
// agents, variables and transitions. On failure returns at least one error
// diagnostic with a location. Structural checks done here: duplicate agent
// names, duplicate variable names, and that each agent's initial location is
// an endpoint of some transition ("unknown initial location" otherwise).
ParseResult parse_system(std::string_view text);

// Parses "<<A,B>> (X|G|F) PRED" or "<<A>> PRED U PRED". Nested strategic
// operators and the release operator are rejected as unsupported.
FormulaParseResult parse_formula(std::string_view text);

// Canonical re-printing; parse(pretty_print(parse(text))) is structurally
// identical to parse(text).
std::string pretty_print(const SystemSpec &spec);
std::string pretty_print(const FormulaAst &formula);
std::string to_string(const BoolExpr &expr);
std::string to_string(const Operand &operand);

bool structurally_equal(const SystemSpec &a, const SystemSpec &b);

}  // namespace amc
