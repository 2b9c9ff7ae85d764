#include "parlogue/pdl/parser.hpp"

#include "parlogue/pdl/lexer.hpp"

namespace parlogue::pdl {

namespace {

struct SyntaxError {
  Diagnostic diagnostic;
  Tok at;  // offending token kind
};

constexpr std::size_t kMaxNesting = 256;

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (check(Tok::Param)) p.params.push_back(param_decl());
    while (check(Tok::Method)) p.methods.push_back(method_def());
    if (!check(Tok::Logic)) {
      fail(std::string("expected 'param', 'method' or 'logic', found ") + found());
    }
    advance();
    p.logic = block();
    expect(Tok::End, "after the logic block");
    return p;
  }

  std::vector<MethodDef> methods() {
    std::vector<MethodDef> out;
    while (check(Tok::Method)) out.push_back(method_def());
    expect(Tok::End, "after method definitions");
    return out;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool check(Tok k) const { return cur().kind == k; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!check(k)) return false;
    advance();
    return true;
  }

  std::string found() const {
    const Token& t = cur();
    if (t.kind == Tok::Ident || t.kind == Tok::Number) return "'" + t.text + "'";
    return std::string(describe(t.kind));
  }

  [[noreturn]] void fail(std::string message) const { fail_at(std::move(message), cur().span); }
  [[noreturn]] void fail_at(std::string message, Span span) const {
    throw SyntaxError{error(code::kSyntax, std::move(message), span), cur().kind};
  }

  const Token& expect(Tok k, std::string_view context) {
    if (!check(k)) fail("expected " + std::string(describe(k)) + " " + std::string(context) + ", found " + found());
    return advance();
  }

  std::string ident(std::string_view context) { return expect(Tok::Ident, context).text; }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxNesting) p.fail("nesting is too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  // param X: kind (= literal)? (in [a, b])?
  ParamDecl param_decl() {
    advance();
    ParamDecl d;
    d.span = cur().span;
    d.name = ident("after 'param'");
    expect(Tok::Colon, "after the parameter name");
    const Token kind_tok = cur();
    const std::string kind_name = ident("as the parameter kind");
    if (kind_name == "choice") {
      d.kind.tag = params::KindTag::Choice;
      expect(Tok::LParen, "after 'choice'");
      do {
        d.kind.options.push_back(expect(Tok::String, "as a choice option").text);
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "to close the choice options");
    } else {
      const auto tag = params::kind_tag_from_string(kind_name);
      if (!tag || *tag == params::KindTag::Choice) fail_at("unknown parameter kind '" + kind_name + "'", kind_tok.span);
      d.kind.tag = *tag;
    }
    if (accept(Tok::Assign)) d.default_value = literal();
    if (accept(Tok::In)) {
      expect(Tok::LBracket, "to open the range");
      const double lo = signed_number();
      expect(Tok::Comma, "between range bounds");
      const double hi = signed_number();
      expect(Tok::RBracket, "to close the range");
      d.range = params::Range{lo, hi};
    }
    return d;
  }

  double signed_number() {
    const bool neg = accept(Tok::Minus);
    const double v = expect(Tok::Number, "in the range").number;
    return neg ? -v : v;
  }

  params::ParamValue literal() {
    if (accept(Tok::True)) return true;
    if (accept(Tok::False)) return false;
    if (check(Tok::String)) return advance().text;
    const bool neg = accept(Tok::Minus);
    const double v = expect(Tok::Number, "as the default value").number;
    return neg ? -v : v;
  }

  TypeName type_name() {
    const Token t = cur();
    const auto name = ident("as a type");
    auto ty = type_name_from_string(name);
    if (!ty) fail_at("unknown type '" + name + "'", t.span);
    return *ty;
  }

  // method name(a: type, ...) -> type { ... }
  MethodDef method_def() {
    advance();
    MethodDef m;
    m.span = cur().span;
    m.name = ident("after 'method'");
    expect(Tok::LParen, "after the method name");
    if (!check(Tok::RParen)) {
      do {
        MethodParam mp;
        mp.span = cur().span;
        mp.name = ident("as a parameter name");
        expect(Tok::Colon, "after the parameter name");
        mp.type = type_name();
        m.params.push_back(std::move(mp));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "to close the parameter list");
    expect(Tok::Arrow, "before the return type");
    m.return_type = type_name();
    m.body = block();
    return m;
  }

  Block block() {
    DepthGuard guard(*this);
    expect(Tok::LBrace, "to open a block");
    Block b;
    while (!check(Tok::RBrace)) {
      if (check(Tok::End)) fail("expected '}' to close the block, found end of input");
      b.stmts.push_back(statement());
    }
    advance();
    return b;
  }

  StmtPtr statement() {
    const Span span = cur().span;
    switch (cur().kind) {
      case Tok::Let: {
        advance();
        std::string name = ident("after 'let'");
        expect(Tok::Assign, "after the variable name");
        auto init = expression();
        expect(Tok::Semicolon, "after the let statement");
        return make_stmt(Let{std::move(name), std::move(init)}, span);
      }
      case Tok::For: {
        advance();
        std::string var = ident("after 'for'");
        expect(Tok::In, "after the loop variable");
        const Token range_tok = cur();
        if (ident("after 'in'") != "range") fail_at("expected 'range' after 'in'", range_tok.span);
        expect(Tok::LParen, "after 'range'");
        ExprPtr start;
        ExprPtr end = expression();
        if (accept(Tok::Comma)) {
          start = end;
          end = expression();
        }
        expect(Tok::RParen, "to close range(...)");
        Block body = block();
        return make_stmt(For{std::move(var), std::move(start), std::move(end), std::move(body)}, span);
      }
      case Tok::If: return if_stmt();
      case Tok::Emit: {
        const Token kw = advance();
        expect(Tok::LParen, "after 'emit'");
        ExprPtr value;
        try {
          value = expression();
          expect(Tok::RParen, "to close emit(...)");
        } catch (const SyntaxError& e) {
          rethrow_unclosed(e, "emit", kw.span);
        }
        expect(Tok::Semicolon, "after emit(...)");
        return make_stmt(Emit{std::move(value)}, span);
      }
      case Tok::Return: {
        advance();
        auto value = expression();
        expect(Tok::Semicolon, "after the return statement");
        return make_stmt(Return{std::move(value)}, span);
      }
      case Tok::Ident:
        if (toks_[pos_ + 1].kind == Tok::Assign) {
          std::string name = advance().text;
          advance();
          auto value = expression();
          expect(Tok::Semicolon, "after the assignment");
          return make_stmt(Assign{std::move(name), std::move(value)}, span);
        }
        [[fallthrough]];
      default: {
        auto e = expression();
        expect(Tok::Semicolon, "after the expression");
        return make_stmt(ExprStmt{std::move(e)}, span);
      }
    }
  }

  StmtPtr if_stmt() {
    DepthGuard guard(*this);
    const Span span = cur().span;
    advance();
    auto cond = expression();
    Block then_block = block();
    std::optional<Block> else_block;
    if (accept(Tok::Else)) {
      if (check(Tok::If)) {
        Block b;
        b.stmts.push_back(if_stmt());
        else_block = std::move(b);
      } else {
        else_block = block();
      }
    }
    return make_stmt(If{std::move(cond), std::move(then_block), std::move(else_block)}, span);
  }

  // An unclosed call is reported at the callee when the parser runs into a
  // statement or block terminator.
  [[noreturn]] void rethrow_unclosed(const SyntaxError& e, std::string_view callee, Span callee_span) {
    if (e.at == Tok::RBrace || e.at == Tok::Semicolon || e.at == Tok::End) {
      throw SyntaxError{error(code::kSyntax, "unclosed call to '" + std::string(callee) + "'", callee_span), e.at};
    }
    throw e;
  }

  static int precedence(Tok t) {
    switch (t) {
      case Tok::OrOr: return 1;
      case Tok::AndAnd: return 2;
      case Tok::EqEq:
      case Tok::NotEq: return 3;
      case Tok::Less:
      case Tok::LessEq:
      case Tok::Greater:
      case Tok::GreaterEq: return 4;
      case Tok::Plus:
      case Tok::Minus: return 5;
      case Tok::Star:
      case Tok::Slash:
      case Tok::Percent: return 6;
      default: return 0;
    }
  }

  static BinaryOp binary_op(Tok t) {
    switch (t) {
      case Tok::OrOr: return BinaryOp::Or;
      case Tok::AndAnd: return BinaryOp::And;
      case Tok::EqEq: return BinaryOp::Eq;
      case Tok::NotEq: return BinaryOp::Ne;
      case Tok::Less: return BinaryOp::Lt;
      case Tok::LessEq: return BinaryOp::Le;
      case Tok::Greater: return BinaryOp::Gt;
      case Tok::GreaterEq: return BinaryOp::Ge;
      case Tok::Plus: return BinaryOp::Add;
      case Tok::Minus: return BinaryOp::Sub;
      case Tok::Star: return BinaryOp::Mul;
      case Tok::Slash: return BinaryOp::Div;
      default: return BinaryOp::Mod;
    }
  }

  ExprPtr expression(int min_prec = 1) {
    DepthGuard guard(*this);
    ExprPtr lhs = unary();
    while (true) {
      const int prec = precedence(cur().kind);
      if (prec < min_prec || prec == 0) return lhs;
      const Token op = advance();
      ExprPtr rhs = expression(prec + 1);
      Span span = lhs->span;
      span.len = rhs->span.offset + rhs->span.len - span.offset;
      lhs = make_expr(Binary{binary_op(op.kind), lhs, rhs}, span);
    }
  }

  ExprPtr unary() {
    DepthGuard guard(*this);
    if (check(Tok::Minus) || check(Tok::Bang)) {
      const Token op = advance();
      ExprPtr operand = unary();
      Span span = op.span;
      span.len = operand->span.offset + operand->span.len - span.offset;
      return make_expr(Unary{op.kind == Tok::Minus ? UnaryOp::Neg : UnaryOp::Not, operand}, span);
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (check(Tok::LBracket)) {
      advance();
      ExprPtr index = expression();
      const Token close = expect(Tok::RBracket, "to close the index");
      Span span = e->span;
      span.len = close.span.offset + 1 - span.offset;
      e = make_expr(Index{e, index}, span);
    }
    return e;
  }

  ExprPtr primary() {
    const Token t = cur();
    switch (t.kind) {
      case Tok::Number: advance(); return make_expr(NumberLit{t.number}, t.span);
      case Tok::String: advance(); return make_expr(StringLit{t.text}, t.span);
      case Tok::True: advance(); return make_expr(BoolLit{true}, t.span);
      case Tok::False: advance(); return make_expr(BoolLit{false}, t.span);
      case Tok::LParen: {
        advance();
        ExprPtr inner = expression();
        expect(Tok::RParen, "to close the parenthesis");
        return inner;
      }
      case Tok::LBracket: {
        advance();
        std::vector<ExprPtr> elements;
        if (!check(Tok::RBracket)) {
          do {
            elements.push_back(expression());
          } while (accept(Tok::Comma));
        }
        const Token close = expect(Tok::RBracket, "to close the list");
        Span span = t.span;
        span.len = close.span.offset + 1 - span.offset;
        return make_expr(ListLit{std::move(elements)}, span);
      }
      case Tok::Ident: {
        advance();
        if (!check(Tok::LParen)) return make_expr(Ident{t.text}, t.span);
        advance();
        std::vector<ExprPtr> args;
        Token close;
        try {
          if (!check(Tok::RParen)) {
            do {
              args.push_back(expression());
            } while (accept(Tok::Comma));
          }
          close = expect(Tok::RParen, "to close the call");
        } catch (const SyntaxError& e) {
          rethrow_unclosed(e, t.text, t.span);
        }
        Span span = t.span;
        span.len = close.span.offset + 1 - span.offset;
        return make_expr(Call{t.text, t.span, std::move(args)}, span);
      }
      default: fail("expected an expression, found " + found());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

template <class T, class F>
ParseResult<T> run(std::string_view source, F&& body) {
  ParseResult<T> out;
  auto lexed = lex(source);
  if (!lexed.diagnostics.empty()) {
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  Parser parser(std::move(lexed.tokens));
  try {
    out.value = body(parser);
  } catch (const SyntaxError& e) {
    out.diagnostics.push_back(e.diagnostic);
  }
  return out;
}

}  // namespace

ParseResult<Program> parse(std::string_view source) {
  return run<Program>(source, [](Parser& p) { return p.program(); });
}

ParseResult<std::vector<MethodDef>> parse_methods(std::string_view source) {
  return run<std::vector<MethodDef>>(source, [](Parser& p) { return p.methods(); });
}

}  // namespace parlogue::pdl
