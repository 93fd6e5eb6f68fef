#pragma once

// Resolved flat strategic formulas: atoms, boolean state predicates, and a
// single strategic modality over one temporal operator.

#include <optional>
#include <string>
#include <vector>

#include "amc/ast.hpp"
#include "amc/model.hpp"
#include "amc/validate.hpp"

namespace amc {

struct Atom {
  enum class Kind { location, comparison };
  Kind kind = Kind::location;
  int agent = -1;
  int location = -1;       // location kind
  int var = -1;            // comparison kind
  CmpOp op = CmpOp::le;    // comparison kind
  int constant = 0;        // comparison kind

  bool operator==(const Atom &) const = default;
};

std::string to_string(const Atom &atom, const ValidatedSystem &sys);

struct StatePredicate {
  enum class Kind { constant, atom, negation, conjunction, disjunction, implication };
  Kind kind = Kind::constant;
  bool value = true;
  Atom atom;
  std::vector<StatePredicate> children;

  static StatePredicate constant_true() { return StatePredicate{}; }
  static StatePredicate of(Atom a) {
    StatePredicate p;
    p.kind = Kind::atom;
    p.atom = a;
    return p;
  }
};

// Coalition + one temporal operator + predicate(s). F is rewritten to
// true U p at classification time; the evaluators treat X, G and U as
// primitive.
struct FlatFormula {
  std::vector<int> coalition;  // ascending agent ids, may be empty
  TemporalOp op = TemporalOp::globally;
  StatePredicate lhs;  // X/G operand, or U left side
  StatePredicate rhs;  // U right side
  std::string text;    // surface form, for reports
};

struct ClassifyResult {
  std::optional<FlatFormula> formula;
  Diagnostics diags;
  bool ok() const { return formula.has_value(); }
};

// Binds a parsed formula against a system: resolves coalition names,
// location atoms and comparison atoms, and rewrites F. Named atoms that match
// nothing yield an error (the flat fragment has no free propositions).
ClassifyResult classify(const FormulaAst &ast, const ValidatedSystem &sys);

// Syntactic atom closure of a parsed formula: canonical strings, sorted and
// deduplicated. Named atoms count as themselves.
std::vector<std::string> atoms_of(const FormulaAst &ast);
// Resolved closure of a classified formula.
std::vector<Atom> atoms_of(const FlatFormula &formula);

bool eval_atom(const GlobalModel &model, uint32_t state, const Atom &atom);
bool eval_state_pred(const GlobalModel &model, uint32_t state,
                     const StatePredicate &pred);

// Parses an atom in surface syntax ("A@loc", "A.var<=2") and resolves it.
std::optional<Atom> parse_atom(std::string_view text, const ValidatedSystem &sys,
                               Diagnostics *diags = nullptr);

}  // namespace amc
