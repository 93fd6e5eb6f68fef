#pragma once

// Parsed, name-unresolved representation of .amas agent specifications and
// strategic formulas. Validation (validate.hpp) turns these into the indexed
// form the composition and verification layers work on.

#include <memory>
#include <string>
#include <vector>

#include "amc/diag.hpp"

namespace amc {

enum class CmpOp { lt, le, eq, ge, gt, ne };

const char *to_string(CmpOp op);
bool cmp_holds(CmpOp op, long lhs, long rhs);

// Operand of a comparison or update right-hand side: an integer constant, a
// variable of the owning agent, or a peer agent's variable ("Peer.var").
struct Operand {
  enum class Kind { constant, own_var, peer_var };
  Kind kind = Kind::constant;
  long value = 0;
  std::string agent;  // peer_var only
  std::string var;    // own_var / peer_var
  SourceLoc loc;
};

struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

// Shared boolean-expression shape for transition guards and formula state
// predicates. Guards may only use constants and comparisons; the extra atom
// kinds (location_atom, named_atom) occur in formulas and are rejected by
// validation when they appear in a guard position.
struct BoolExpr {
  enum class Kind {
    constant,
    compare,
    negation,
    conjunction,
    disjunction,
    implication,
    location_atom,  // Agent@loc
    named_atom      // bare proposition name; resolvable only if bound later
  };
  Kind kind = Kind::constant;
  bool value = true;            // constant
  Operand lhs, rhs;             // compare
  CmpOp op = CmpOp::eq;         // compare
  BoolExprPtr a, b;             // children (negation uses a only)
  std::string agent, name;      // location_atom: agent@name; named_atom: name
  SourceLoc loc;
};

BoolExprPtr make_const(bool v);
BoolExprPtr make_compare(Operand lhs, CmpOp op, Operand rhs, SourceLoc loc = {});
BoolExprPtr make_not(BoolExprPtr a);
BoolExprPtr make_binary(BoolExpr::Kind kind, BoolExprPtr a, BoolExprPtr b);

enum class AssignOp { set, add, sub };

struct Update {
  std::string var;  // written variable, always owned by the acting agent
  AssignOp op = AssignOp::set;
  Operand rhs;
  SourceLoc loc;
};

struct TransitionDecl {
  std::string source;
  std::string event;
  std::string dest;
  BoolExprPtr guard;  // null means "true"
  std::vector<Update> updates;
  SourceLoc loc;
};

struct VarDeclNode {
  std::string name;
  long lo = 0, hi = 0, init = 0;
  SourceLoc loc;
};

struct AgentDecl {
  std::string name;
  std::string init_location;
  SourceLoc init_loc_pos;
  std::vector<VarDeclNode> vars;
  std::vector<TransitionDecl> transitions;  // source order
  SourceLoc loc;
};

struct SystemSpec {
  std::string name = "system";
  std::vector<AgentDecl> agents;  // declaration order
};

enum class TemporalOp { next_op, globally, finally_op, until };

const char *to_string(TemporalOp op);

// <<A1,...>> T pred  /  <<A1,...>> pred U pred — the flat fragment only.
struct FormulaAst {
  std::vector<std::string> coalition;  // may be empty
  TemporalOp op = TemporalOp::globally;
  BoolExprPtr lhs;  // X/G/F operand, or U left side
  BoolExprPtr rhs;  // U right side only
  SourceLoc loc;
};

}  // namespace amc
