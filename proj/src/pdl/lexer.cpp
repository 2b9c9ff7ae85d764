#include "parlogue/pdl/lexer.hpp"

#include <charconv>
#include <cmath>
#include <utility>

namespace parlogue::pdl {

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Param: return "'param'";
    case Tok::Method: return "'method'";
    case Tok::Logic: return "'logic'";
    case Tok::Let: return "'let'";
    case Tok::For: return "'for'";
    case Tok::In: return "'in'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::Emit: return "'emit'";
    case Tok::Return: return "'return'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Less: return "'<'";
    case Tok::LessEq: return "'<='";
    case Tok::Greater: return "'>'";
    case Tok::GreaterEq: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Bang: return "'!'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

constexpr std::pair<std::string_view, Tok> kKeywords[] = {
    {"param", Tok::Param}, {"method", Tok::Method}, {"logic", Tok::Logic}, {"let", Tok::Let},
    {"for", Tok::For},     {"in", Tok::In},         {"if", Tok::If},       {"else", Tok::Else},
    {"emit", Tok::Emit},   {"return", Tok::Return}, {"true", Tok::True},   {"false", Tok::False},
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.tokens.push_back(Token{Tok::End, "", 0.0, Span{line_, col_, 0, pos_}});
        return out;
      }
      Token t;
      if (!next(t, out.diagnostics)) return out;
      out.tokens.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  bool fail(std::vector<Diagnostic>& ds, std::string message, Span span) {
    ds.push_back(error(code::kSyntax, std::move(message), span));
    return false;
  }

  bool next(Token& t, std::vector<Diagnostic>& ds) {
    const Span start{line_, col_, 0, pos_};
    const char c = src_[pos_];
    auto finish = [&](Tok kind, std::size_t len) {
      t.kind = kind;
      t.text = std::string(src_.substr(pos_, len));
      t.span = start;
      t.span.len = len;
      advance(len);
      return true;
    };

    if (is_alpha(c)) {
      std::size_t len = 1;
      while (is_alpha(peek(len)) || is_digit(peek(len))) ++len;
      const auto word = src_.substr(pos_, len);
      for (const auto& [kw, tok] : kKeywords) {
        if (kw == word) return finish(tok, len);
      }
      return finish(Tok::Ident, len);
    }
    if (is_digit(c)) {
      std::size_t len = 1;
      while (is_digit(peek(len))) ++len;
      if (peek(len) == '.' && is_digit(peek(len + 1))) {
        len += 2;
        while (is_digit(peek(len))) ++len;
      }
      if (peek(len) == 'e' || peek(len) == 'E') {
        std::size_t k = len + 1;
        if (peek(k) == '+' || peek(k) == '-') ++k;
        if (is_digit(peek(k))) {
          while (is_digit(peek(k))) ++k;
          len = k;
        }
      }
      if (is_alpha(peek(len))) {
        return fail(ds, "malformed number '" + std::string(src_.substr(pos_, len + 1)) + "'", Span{line_, col_, len + 1, pos_});
      }
      double value = 0.0;
      const auto* first = src_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, first + len, value);
      if (ec != std::errc() || ptr != first + len || !std::isfinite(value)) {
        return fail(ds, "number out of range", Span{line_, col_, len, pos_});
      }
      t.number = value;
      return finish(Tok::Number, len);
    }
    if (c == '"') {
      std::string text;
      std::size_t len = 1;
      while (true) {
        const char d = peek(len);
        if (d == '\0' || d == '\n') return fail(ds, "unterminated string", Span{line_, col_, len, pos_});
        if (d == '"') break;
        if (d == '\\') {
          const char e = peek(len + 1);
          if (e == '"' || e == '\\') {
            text += e;
          } else if (e == 'n') {
            text += '\n';
          } else {
            return fail(ds, "unknown escape in string", Span{line_, col_ + len, 2, pos_ + len});
          }
          len += 2;
          continue;
        }
        text += d;
        ++len;
      }
      finish(Tok::String, len + 1);
      t.text = std::move(text);
      return true;
    }

    const char n = peek(1);
    switch (c) {
      case '(': return finish(Tok::LParen, 1);
      case ')': return finish(Tok::RParen, 1);
      case '{': return finish(Tok::LBrace, 1);
      case '}': return finish(Tok::RBrace, 1);
      case '[': return finish(Tok::LBracket, 1);
      case ']': return finish(Tok::RBracket, 1);
      case ',': return finish(Tok::Comma, 1);
      case ';': return finish(Tok::Semicolon, 1);
      case ':': return finish(Tok::Colon, 1);
      case '+': return finish(Tok::Plus, 1);
      case '*': return finish(Tok::Star, 1);
      case '/': return finish(Tok::Slash, 1);
      case '%': return finish(Tok::Percent, 1);
      case '-': return n == '>' ? finish(Tok::Arrow, 2) : finish(Tok::Minus, 1);
      case '=': return n == '=' ? finish(Tok::EqEq, 2) : finish(Tok::Assign, 1);
      case '!': return n == '=' ? finish(Tok::NotEq, 2) : finish(Tok::Bang, 1);
      case '<': return n == '=' ? finish(Tok::LessEq, 2) : finish(Tok::Less, 1);
      case '>': return n == '=' ? finish(Tok::GreaterEq, 2) : finish(Tok::Greater, 1);
      case '&':
        if (n == '&') return finish(Tok::AndAnd, 2);
        break;
      case '|':
        if (n == '|') return finish(Tok::OrOr, 2);
        break;
      default: break;
    }
    return fail(ds, "unexpected character '" + std::string(1, c) + "'", Span{line_, col_, 1, pos_});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

LexResult lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace parlogue::pdl
