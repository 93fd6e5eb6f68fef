#include "amc/parser.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace amc {

using lex::Tok;
using lex::Token;

const char *to_string(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "==";
    case CmpOp::ge: return ">=";
    case CmpOp::gt: return ">";
    case CmpOp::ne: return "!=";
  }
  return "?";
}

bool cmp_holds(CmpOp op, long lhs, long rhs) {
  switch (op) {
    case CmpOp::lt: return lhs < rhs;
    case CmpOp::le: return lhs <= rhs;
    case CmpOp::eq: return lhs == rhs;
    case CmpOp::ge: return lhs >= rhs;
    case CmpOp::gt: return lhs > rhs;
    case CmpOp::ne: return lhs != rhs;
  }
  return false;
}

const char *to_string(TemporalOp op) {
  switch (op) {
    case TemporalOp::next_op: return "X";
    case TemporalOp::globally: return "G";
    case TemporalOp::finally_op: return "F";
    case TemporalOp::until: return "U";
  }
  return "?";
}

BoolExprPtr make_const(bool v) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::constant;
  e->value = v;
  return e;
}

BoolExprPtr make_compare(Operand lhs, CmpOp op, Operand rhs, SourceLoc loc) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::compare;
  e->lhs = std::move(lhs);
  e->op = op;
  e->rhs = std::move(rhs);
  e->loc = loc;
  return e;
}

BoolExprPtr make_not(BoolExprPtr a) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::negation;
  e->loc = a ? a->loc : SourceLoc{};
  e->a = std::move(a);
  return e;
}

BoolExprPtr make_binary(BoolExpr::Kind kind, BoolExprPtr a, BoolExprPtr b) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = kind;
  e->loc = a ? a->loc : SourceLoc{};
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

namespace {

// Recursive-descent parser over the shared token stream. Formula mode adds
// coalition brackets, @-atoms and free proposition names to the expression
// grammar; spec mode adds var/peer operands only.
class Parser {
 public:
  Parser(std::vector<Token> tokens, bool formula_mode, Diagnostics &diags)
      : toks_(std::move(tokens)), formula_mode_(formula_mode), diags_(diags) {}

  const Token &cur() const { return toks_[pos_]; }
  const Token &ahead(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  void bump() {
    if (toks_[pos_].kind != Tok::end) ++pos_;
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    bump();
    return true;
  }

  void error(const std::string &msg, SourceLoc loc) {
    diags_.push_back({Severity::error, msg, loc});
  }
  void error_here(const std::string &msg) { error(msg, cur().loc); }

  bool expect(Tok k) {
    if (eat(k)) return true;
    error_here(std::string("expected ") + lex::describe(k) + ", found " +
               lex::describe(cur().kind));
    return false;
  }

  bool failed() const { return has_errors(diags_); }

  // ---- expressions (guards and state predicates) ----

  std::optional<Operand> parse_operand() {
    Operand op;
    op.loc = cur().loc;
    if (at(Tok::number) || at(Tok::minus)) {
      bool neg = eat(Tok::minus);
      if (!at(Tok::number)) {
        error_here("expected number");
        return std::nullopt;
      }
      op.kind = Operand::Kind::constant;
      op.value = neg ? -cur().value : cur().value;
      bump();
      return op;
    }
    if (at(Tok::ident)) {
      std::string first = cur().text;
      bump();
      if (eat(Tok::dot)) {
        if (!at(Tok::ident)) {
          error_here("expected variable name after '.'");
          return std::nullopt;
        }
        op.kind = Operand::Kind::peer_var;
        op.agent = first;
        op.var = cur().text;
        bump();
        return op;
      }
      op.kind = Operand::Kind::own_var;
      op.var = first;
      return op;
    }
    error_here("expected constant or variable");
    return std::nullopt;
  }

  std::optional<CmpOp> parse_cmp_op() {
    switch (cur().kind) {
      case Tok::lt: bump(); return CmpOp::lt;
      case Tok::le: bump(); return CmpOp::le;
      case Tok::eq_eq: bump(); return CmpOp::eq;
      case Tok::ge: bump(); return CmpOp::ge;
      case Tok::gt: bump(); return CmpOp::gt;
      case Tok::ne: bump(); return CmpOp::ne;
      default:
        error_here("expected comparison operator");
        return std::nullopt;
    }
  }

  // primary := '!' primary | '(' expr ')' | true | false | atom | compare
  BoolExprPtr parse_primary() {
    SourceLoc loc = cur().loc;
    if (eat(Tok::bang)) {
      auto inner = parse_primary();
      if (!inner) return nullptr;
      auto e = make_not(std::move(inner));
      return e;
    }
    if (eat(Tok::lparen)) {
      auto inner = parse_expr();
      if (!inner) return nullptr;
      expect(Tok::rparen);
      return inner;
    }
    if (at(Tok::kw_true)) {
      bump();
      return make_const(true);
    }
    if (at(Tok::kw_false)) {
      bump();
      return make_const(false);
    }
    if (formula_mode_ && at(Tok::coal_open)) {
      error_here("nested strategic operators unsupported");
      return nullptr;
    }
    if (formula_mode_ && at(Tok::ident)) {
      // Agent@loc, Agent.var CMP const, or a bare proposition name.
      if (ahead().kind == Tok::at) {
        auto e = std::make_shared<BoolExpr>();
        e->kind = BoolExpr::Kind::location_atom;
        e->agent = cur().text;
        e->loc = loc;
        bump();
        bump();  // '@'
        if (!at(Tok::ident)) {
          error_here("expected location name after '@'");
          return nullptr;
        }
        e->name = cur().text;
        bump();
        return e;
      }
      if (ahead().kind != Tok::dot) {
        // Bare name: stays unresolved until classification binds it.
        auto e = std::make_shared<BoolExpr>();
        e->kind = BoolExpr::Kind::named_atom;
        e->name = cur().text;
        e->loc = loc;
        bump();
        return e;
      }
    }
    // Comparison.
    auto lhs = parse_operand();
    if (!lhs) return nullptr;
    auto op = parse_cmp_op();
    if (!op) return nullptr;
    auto rhs = parse_operand();
    if (!rhs) return nullptr;
    return make_compare(std::move(*lhs), *op, std::move(*rhs), loc);
  }

  BoolExprPtr parse_and() {
    auto e = parse_primary();
    while (e && at(Tok::and_and)) {
      bump();
      auto r = parse_primary();
      if (!r) return nullptr;
      e = make_binary(BoolExpr::Kind::conjunction, std::move(e), std::move(r));
    }
    return e;
  }

  BoolExprPtr parse_or() {
    auto e = parse_and();
    while (e && at(Tok::or_or)) {
      bump();
      auto r = parse_and();
      if (!r) return nullptr;
      e = make_binary(BoolExpr::Kind::disjunction, std::move(e), std::move(r));
    }
    return e;
  }

  // expr := or ('->' expr)?   (implication, right-associative, lowest)
  BoolExprPtr parse_expr() {
    auto e = parse_or();
    if (e && at(Tok::arrow)) {
      bump();
      auto r = parse_expr();
      if (!r) return nullptr;
      e = make_binary(BoolExpr::Kind::implication, std::move(e), std::move(r));
    }
    return e;
  }

  // ---- agent specification ----

  std::optional<Update> parse_update() {
    Update u;
    u.loc = cur().loc;
    if (!at(Tok::ident)) {
      error_here("expected variable name in update");
      return std::nullopt;
    }
    u.var = cur().text;
    bump();
    if (eat(Tok::plus_assign)) u.op = AssignOp::add;
    else if (eat(Tok::minus_assign)) u.op = AssignOp::sub;
    else if (eat(Tok::assign)) u.op = AssignOp::set;
    else {
      error_here("expected '=', '+=' or '-=' in update");
      return std::nullopt;
    }
    auto rhs = parse_operand();
    if (!rhs) return std::nullopt;
    u.rhs = std::move(*rhs);
    return u;
  }

  // SRC -[ EVENT (when GUARD)? (do UPDATE(,UPDATE)*)? ]-> DST ;
  std::optional<TransitionDecl> parse_transition(std::string source,
                                                 SourceLoc loc) {
    TransitionDecl t;
    t.source = std::move(source);
    t.loc = loc;
    if (!expect(Tok::minus) || !expect(Tok::lbracket)) return std::nullopt;
    if (!at(Tok::ident)) {
      error_here("expected event name");
      return std::nullopt;
    }
    t.event = cur().text;
    bump();
    if (eat(Tok::kw_when)) {
      t.guard = parse_expr();
      if (!t.guard) return std::nullopt;
    }
    if (eat(Tok::kw_do)) {
      do {
        auto u = parse_update();
        if (!u) return std::nullopt;
        t.updates.push_back(std::move(*u));
      } while (eat(Tok::comma));
    }
    if (!expect(Tok::rbracket) || !expect(Tok::arrow)) return std::nullopt;
    if (!at(Tok::ident)) {
      error_here("expected destination location");
      return std::nullopt;
    }
    t.dest = cur().text;
    bump();
    expect(Tok::semicolon);
    return t;
  }

  std::optional<AgentDecl> parse_agent() {
    AgentDecl agent;
    agent.loc = cur().loc;
    if (!expect(Tok::kw_agent)) return std::nullopt;
    if (!at(Tok::ident)) {
      error_here("expected agent name");
      return std::nullopt;
    }
    agent.name = cur().text;
    bump();
    if (!expect(Tok::lbrace)) return std::nullopt;
    while (!at(Tok::rbrace) && !at(Tok::end)) {
      if (eat(Tok::kw_init)) {
        if (!agent.init_location.empty())
          error_here("duplicate init declaration");
        agent.init_loc_pos = cur().loc;
        if (!at(Tok::ident)) {
          error_here("expected location name after 'init'");
          return std::nullopt;
        }
        agent.init_location = cur().text;
        bump();
        expect(Tok::semicolon);
        continue;
      }
      if (eat(Tok::kw_var)) {
        VarDeclNode v;
        v.loc = cur().loc;
        if (!at(Tok::ident)) {
          error_here("expected variable name");
          return std::nullopt;
        }
        v.name = cur().text;
        bump();
        if (!expect(Tok::colon)) return std::nullopt;
        if (!parse_int(v.lo) || !expect(Tok::dotdot) || !parse_int(v.hi) ||
            !expect(Tok::assign) || !parse_int(v.init))
          return std::nullopt;
        expect(Tok::semicolon);
        agent.vars.push_back(std::move(v));
        continue;
      }
      if (at(Tok::ident)) {
        std::string src = cur().text;
        SourceLoc loc = cur().loc;
        bump();
        auto t = parse_transition(std::move(src), loc);
        if (!t) return std::nullopt;
        agent.transitions.push_back(std::move(*t));
        continue;
      }
      error_here(std::string("expected 'init', 'var' or a transition, found ") +
                 lex::describe(cur().kind));
      return std::nullopt;
    }
    if (!expect(Tok::rbrace)) return std::nullopt;
    if (agent.init_location.empty()) {
      error("agent '" + agent.name + "' has no init declaration", agent.loc);
      return std::nullopt;
    }
    return agent;
  }

  bool parse_int(long &out) {
    bool neg = eat(Tok::minus);
    if (!at(Tok::number)) {
      error_here("expected number");
      return false;
    }
    out = neg ? -cur().value : cur().value;
    bump();
    return true;
  }

  std::optional<SystemSpec> parse_system() {
    SystemSpec spec;
    while (!at(Tok::end)) {
      auto agent = parse_agent();
      if (!agent) return std::nullopt;
      spec.agents.push_back(std::move(*agent));
    }
    if (spec.agents.empty()) {
      error_here("input declares no agents");
      return std::nullopt;
    }
    check_names(spec);
    check_init_locations(spec);
    if (failed()) return std::nullopt;
    return spec;
  }

  void check_names(const SystemSpec &spec) {
    std::set<std::string> seen;
    for (const auto &agent : spec.agents) {
      if (!seen.insert(agent.name).second)
        error("duplicate agent name '" + agent.name + "'", agent.loc);
      std::set<std::string> vars;
      for (const auto &v : agent.vars)
        if (!vars.insert(v.name).second)
          error("duplicate variable '" + v.name + "' in agent '" + agent.name +
                    "'",
                v.loc);
    }
  }

  // The location set of an agent is the set of transition endpoints; an init
  // location outside it can never occur.
  void check_init_locations(const SystemSpec &spec) {
    for (const auto &agent : spec.agents) {
      bool found = false;
      for (const auto &t : agent.transitions)
        if (t.source == agent.init_location || t.dest == agent.init_location) {
          found = true;
          break;
        }
      if (!found)
        error("unknown initial location '" + agent.init_location +
                  "' in agent '" + agent.name + "'",
              agent.init_loc_pos);
    }
  }

  // ---- formulas ----

  std::optional<FormulaAst> parse_formula() {
    FormulaAst f;
    f.loc = cur().loc;
    if (!expect(Tok::coal_open)) return std::nullopt;
    if (at(Tok::ident)) {
      f.coalition.push_back(cur().text);
      bump();
      while (eat(Tok::comma)) {
        if (!at(Tok::ident)) {
          error_here("expected agent name in coalition");
          return std::nullopt;
        }
        f.coalition.push_back(cur().text);
        bump();
      }
    }
    if (!expect(Tok::coal_close)) return std::nullopt;

    // Temporal operator or "pred U pred". X/G/F/U/R are reserved words in
    // formula position.
    if (at(Tok::ident) && cur().text.size() == 1 &&
        (cur().text == "X" || cur().text == "G" || cur().text == "F")) {
      std::string opname = cur().text;
      bump();
      f.op = opname == "X"   ? TemporalOp::next_op
             : opname == "G" ? TemporalOp::globally
                             : TemporalOp::finally_op;
      f.lhs = parse_expr();
      if (!f.lhs) return std::nullopt;
    } else if (at(Tok::ident) && (cur().text == "R" || cur().text == "U")) {
      error_here("expected temporal operator X, G, F, or 'pred U pred'");
      return std::nullopt;
    } else {
      f.lhs = parse_expr();
      if (!f.lhs) return std::nullopt;
      if (at(Tok::ident) && cur().text == "U") {
        bump();
        f.op = TemporalOp::until;
        f.rhs = parse_expr();
        if (!f.rhs) return std::nullopt;
      } else if (at(Tok::ident) && cur().text == "R") {
        error_here("release operator unsupported");
        return std::nullopt;
      } else {
        error_here("expected temporal operator (X, G, F before the predicate, "
                   "or infix U)");
        return std::nullopt;
      }
    }
    if (!at(Tok::end)) {
      if (at(Tok::coal_open))
        error_here("nested strategic operators unsupported");
      else
        error_here(std::string("unexpected trailing ") +
                   lex::describe(cur().kind));
      return std::nullopt;
    }
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  bool formula_mode_;
  Diagnostics &diags_;
};

// Unsupported-fragment scan: a strategic bracket inside a formula body is a
// nesting error with a dedicated message, handled in parse_primary; an 'R'
// in until position is handled in parse_formula.

}  // namespace

ParseResult parse_system(std::string_view text) {
  ParseResult result;
  auto lexed = lex::tokenize(text, /*formula_mode=*/false);
  result.diags = lexed.diags;
  if (has_errors(result.diags)) return result;
  Parser parser(std::move(lexed.tokens), false, result.diags);
  auto spec = parser.parse_system();
  if (spec && !has_errors(result.diags)) result.spec = std::move(spec);
  return result;
}

FormulaParseResult parse_formula(std::string_view text) {
  FormulaParseResult result;
  auto lexed = lex::tokenize(text, /*formula_mode=*/true);
  result.diags = lexed.diags;
  if (has_errors(result.diags)) return result;
  Parser parser(std::move(lexed.tokens), true, result.diags);
  auto f = parser.parse_formula();
  if (f && !has_errors(result.diags)) result.formula = std::move(f);
  return result;
}

// ---- printing ----

namespace {

int precedence(BoolExpr::Kind kind) {
  switch (kind) {
    case BoolExpr::Kind::implication: return 0;
    case BoolExpr::Kind::disjunction: return 1;
    case BoolExpr::Kind::conjunction: return 2;
    default: return 3;
  }
}

void print_expr(std::ostream &out, const BoolExpr &e, int parent_prec) {
  int prec = precedence(e.kind);
  bool parens = prec < parent_prec;
  if (parens) out << '(';
  switch (e.kind) {
    case BoolExpr::Kind::constant:
      out << (e.value ? "true" : "false");
      break;
    case BoolExpr::Kind::compare:
      out << to_string(e.lhs) << ' ' << to_string(e.op) << ' '
          << to_string(e.rhs);
      break;
    case BoolExpr::Kind::negation:
      out << '!';
      print_expr(out, *e.a, 3);
      break;
    case BoolExpr::Kind::conjunction:
      print_expr(out, *e.a, prec);
      out << " && ";
      print_expr(out, *e.b, prec + 1);
      break;
    case BoolExpr::Kind::disjunction:
      print_expr(out, *e.a, prec);
      out << " || ";
      print_expr(out, *e.b, prec + 1);
      break;
    case BoolExpr::Kind::implication:
      print_expr(out, *e.a, prec + 1);
      out << " -> ";
      print_expr(out, *e.b, prec);
      break;
    case BoolExpr::Kind::location_atom:
      out << e.agent << '@' << e.name;
      break;
    case BoolExpr::Kind::named_atom:
      out << e.name;
      break;
  }
  if (parens) out << ')';
}

}  // namespace

std::string to_string(const Operand &operand) {
  switch (operand.kind) {
    case Operand::Kind::constant: return std::to_string(operand.value);
    case Operand::Kind::own_var: return operand.var;
    case Operand::Kind::peer_var: return operand.agent + "." + operand.var;
  }
  return "?";
}

std::string to_string(const BoolExpr &expr) {
  std::ostringstream out;
  print_expr(out, expr, 0);
  return out.str();
}

std::string pretty_print(const SystemSpec &spec) {
  std::ostringstream out;
  for (const auto &agent : spec.agents) {
    out << "agent " << agent.name << " {\n";
    out << "  init " << agent.init_location << ";\n";
    for (const auto &v : agent.vars)
      out << "  var " << v.name << ": " << v.lo << ".." << v.hi << " = "
          << v.init << ";\n";
    for (const auto &t : agent.transitions) {
      out << "  " << t.source << " -[" << t.event;
      if (t.guard) out << " when " << to_string(*t.guard);
      if (!t.updates.empty()) {
        out << " do ";
        for (size_t i = 0; i < t.updates.size(); ++i) {
          if (i) out << ", ";
          const Update &u = t.updates[i];
          out << u.var
              << (u.op == AssignOp::add    ? " += "
                  : u.op == AssignOp::sub ? " -= "
                                          : " = ")
              << to_string(u.rhs);
        }
      }
      out << "]-> " << t.dest << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

std::string pretty_print(const FormulaAst &formula) {
  std::ostringstream out;
  out << "<<";
  for (size_t i = 0; i < formula.coalition.size(); ++i) {
    if (i) out << ',';
    out << formula.coalition[i];
  }
  out << ">> ";
  if (formula.op == TemporalOp::until) {
    out << '(';
    print_expr(out, *formula.lhs, 0);
    out << ") U (";
    print_expr(out, *formula.rhs, 0);
    out << ')';
  } else {
    out << to_string(formula.op) << " (";
    print_expr(out, *formula.lhs, 0);
    out << ')';
  }
  return out.str();
}

// ---- structural equality ----

namespace {

bool expr_equal(const BoolExprPtr &a, const BoolExprPtr &b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BoolExpr::Kind::constant: return a->value == b->value;
    case BoolExpr::Kind::compare: {
      auto op_eq = [](const Operand &x, const Operand &y) {
        return x.kind == y.kind && x.value == y.value && x.agent == y.agent &&
               x.var == y.var;
      };
      return a->op == b->op && op_eq(a->lhs, b->lhs) && op_eq(a->rhs, b->rhs);
    }
    case BoolExpr::Kind::negation: return expr_equal(a->a, b->a);
    case BoolExpr::Kind::location_atom:
      return a->agent == b->agent && a->name == b->name;
    case BoolExpr::Kind::named_atom: return a->name == b->name;
    default: return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

}  // namespace

bool structurally_equal(const SystemSpec &a, const SystemSpec &b) {
  if (a.agents.size() != b.agents.size()) return false;
  for (size_t i = 0; i < a.agents.size(); ++i) {
    const AgentDecl &x = a.agents[i], &y = b.agents[i];
    if (x.name != y.name || x.init_location != y.init_location) return false;
    if (x.vars.size() != y.vars.size() ||
        x.transitions.size() != y.transitions.size())
      return false;
    for (size_t j = 0; j < x.vars.size(); ++j) {
      const VarDeclNode &v = x.vars[j], &w = y.vars[j];
      if (v.name != w.name || v.lo != w.lo || v.hi != w.hi || v.init != w.init)
        return false;
    }
    for (size_t j = 0; j < x.transitions.size(); ++j) {
      const TransitionDecl &s = x.transitions[j], &t = y.transitions[j];
      if (s.source != t.source || s.event != t.event || s.dest != t.dest)
        return false;
      BoolExprPtr sg = s.guard ? s.guard : make_const(true);
      BoolExprPtr tg = t.guard ? t.guard : make_const(true);
      if (!expr_equal(sg, tg)) return false;
      if (s.updates.size() != t.updates.size()) return false;
      for (size_t k = 0; k < s.updates.size(); ++k) {
        const Update &u = s.updates[k], &v2 = t.updates[k];
        if (u.var != v2.var || u.op != v2.op) return false;
        if (u.rhs.kind != v2.rhs.kind || u.rhs.value != v2.rhs.value ||
            u.rhs.agent != v2.rhs.agent || u.rhs.var != v2.rhs.var)
          return false;
      }
    }
  }
  return true;
}

}  // namespace amc
