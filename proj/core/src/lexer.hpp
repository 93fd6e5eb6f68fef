#pragma once

// Shared tokenizer for the .amas specification language and the formula
// surface syntax. Internal to the parser.

#include <string>
#include <string_view>
#include <vector>

#include "amc/diag.hpp"

namespace amc::lex {

enum class Tok {
  ident,
  number,
  kw_agent,
  kw_init,
  kw_var,
  kw_when,
  kw_do,
  kw_true,
  kw_false,
  lbrace,
  rbrace,
  lparen,
  rparen,
  lbracket,
  rbracket,
  semicolon,
  colon,
  comma,
  dot,
  dotdot,
  at,
  lt,
  le,
  eq_eq,
  ge,
  gt,
  ne,
  assign,
  plus_assign,
  minus_assign,
  arrow,      // ->
  minus,
  and_and,
  or_or,
  bang,
  coal_open,   // <<
  coal_close,  // >>
  end
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  long value = 0;  // number
  SourceLoc loc;
};

struct LexResult {
  std::vector<Token> tokens;  // terminated by Tok::end
  Diagnostics diags;
};

// formula_mode enables << and >> tokens; outside formulas "<<" never occurs.
LexResult tokenize(std::string_view text, bool formula_mode);

const char *describe(Tok kind);

}  // namespace amc::lex
