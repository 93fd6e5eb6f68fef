#include "lexer.hpp"

#include <cctype>

namespace amc::lex {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

Tok keyword_of(std::string_view word) {
  if (word == "agent") return Tok::kw_agent;
  if (word == "init") return Tok::kw_init;
  if (word == "var") return Tok::kw_var;
  if (word == "when") return Tok::kw_when;
  if (word == "do") return Tok::kw_do;
  if (word == "true") return Tok::kw_true;
  if (word == "false") return Tok::kw_false;
  return Tok::ident;
}

}  // namespace

LexResult tokenize(std::string_view text, bool formula_mode) {
  LexResult result;
  size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < text.size() && text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto peek = [&](size_t off = 0) -> char {
    return i + off < text.size() ? text[i + off] : '\0';
  };
  auto push = [&](Tok kind, size_t len) {
    Token t;
    t.kind = kind;
    t.text = std::string(text.substr(i, len));
    t.loc = {line, col};
    result.tokens.push_back(std::move(t));
    advance(len);
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && peek(1) == '/')) {  // line comment
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      size_t len = 1;
      while (i + len < text.size() && ident_char(text[i + len])) ++len;
      std::string_view word = text.substr(i, len);
      push(keyword_of(word), len);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t len = 1;
      while (i + len < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + len])))
        ++len;
      Token t;
      t.kind = Tok::number;
      t.text = std::string(text.substr(i, len));
      t.value = std::stol(t.text);
      t.loc = {line, col};
      result.tokens.push_back(std::move(t));
      advance(len);
      continue;
    }
    switch (c) {
      case '{': push(Tok::lbrace, 1); continue;
      case '}': push(Tok::rbrace, 1); continue;
      case '(': push(Tok::lparen, 1); continue;
      case ')': push(Tok::rparen, 1); continue;
      case '[': push(Tok::lbracket, 1); continue;
      case ']': push(Tok::rbracket, 1); continue;
      case ';': push(Tok::semicolon, 1); continue;
      case ':': push(Tok::colon, 1); continue;
      case ',': push(Tok::comma, 1); continue;
      case '@': push(Tok::at, 1); continue;
      case '.':
        if (peek(1) == '.') push(Tok::dotdot, 2);
        else push(Tok::dot, 1);
        continue;
      case '<':
        if (peek(1) == '=') push(Tok::le, 2);
        else if (formula_mode && peek(1) == '<') push(Tok::coal_open, 2);
        else push(Tok::lt, 1);
        continue;
      case '>':
        if (peek(1) == '=') push(Tok::ge, 2);
        else if (formula_mode && peek(1) == '>') push(Tok::coal_close, 2);
        else push(Tok::gt, 1);
        continue;
      case '=':
        if (peek(1) == '=') push(Tok::eq_eq, 2);
        else push(Tok::assign, 1);
        continue;
      case '!':
        if (peek(1) == '=') push(Tok::ne, 2);
        else push(Tok::bang, 1);
        continue;
      case '+':
        if (peek(1) == '=') push(Tok::plus_assign, 2);
        else {
          result.diags.push_back({Severity::error, "stray '+'", {line, col}});
          advance(1);
        }
        continue;
      case '-':
        if (peek(1) == '=') push(Tok::minus_assign, 2);
        else if (peek(1) == '>') push(Tok::arrow, 2);
        else push(Tok::minus, 1);
        continue;
      case '&':
        if (peek(1) == '&') push(Tok::and_and, 2);
        else {
          result.diags.push_back({Severity::error, "expected '&&'", {line, col}});
          advance(1);
        }
        continue;
      case '|':
        if (peek(1) == '|') push(Tok::or_or, 2);
        else {
          result.diags.push_back({Severity::error, "expected '||'", {line, col}});
          advance(1);
        }
        continue;
      default:
        result.diags.push_back(
            {Severity::error, std::string("unexpected character '") + c + "'",
             {line, col}});
        advance(1);
        continue;
    }
  }
  result.tokens.push_back({Tok::end, "", 0, {line, col}});
  return result;
}

const char *describe(Tok kind) {
  switch (kind) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::kw_agent: return "'agent'";
    case Tok::kw_init: return "'init'";
    case Tok::kw_var: return "'var'";
    case Tok::kw_when: return "'when'";
    case Tok::kw_do: return "'do'";
    case Tok::kw_true: return "'true'";
    case Tok::kw_false: return "'false'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::semicolon: return "';'";
    case Tok::colon: return "':'";
    case Tok::comma: return "','";
    case Tok::dot: return "'.'";
    case Tok::dotdot: return "'..'";
    case Tok::at: return "'@'";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::eq_eq: return "'=='";
    case Tok::ge: return "'>='";
    case Tok::gt: return "'>'";
    case Tok::ne: return "'!='";
    case Tok::assign: return "'='";
    case Tok::plus_assign: return "'+='";
    case Tok::minus_assign: return "'-='";
    case Tok::arrow: return "'->'";
    case Tok::minus: return "'-'";
    case Tok::and_and: return "'&&'";
    case Tok::or_or: return "'||'";
    case Tok::bang: return "'!'";
    case Tok::coal_open: return "'<<'";
    case Tok::coal_close: return "'>>'";
    case Tok::end: return "end of input";
  }
  return "?";
}

}  // namespace amc::lex
