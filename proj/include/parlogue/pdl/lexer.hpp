#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parlogue/pdl/diagnostic.hpp"

namespace parlogue::pdl {

enum class Tok {
  Ident,
  Number,
  String,
  // keywords
  Param,
  Method,
  Logic,
  Let,
  For,
  In,
  If,
  Else,
  Emit,
  Return,
  True,
  False,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semicolon,
  Colon,
  Arrow,
  Assign,
  EqEq,
  NotEq,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Bang,
  AndAnd,
  OrOr,
  End,
};

std::string_view describe(Tok t);

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, number spelling, or decoded string
  double number = 0.0;
  Span span;
};

struct LexResult {
  std::vector<Token> tokens;  // always ends with Tok::End on success
  std::vector<Diagnostic> diagnostics;
};

/// `//` comments run to end of line. Strings use double quotes with \" \\ \n
/// escapes. Reports the first lexical error only.
LexResult lex(std::string_view source);

}  // namespace parlogue::pdl
