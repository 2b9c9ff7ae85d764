#include "parlogue/pdl/format.hpp"

#include "parlogue/common/text.hpp"

namespace parlogue::pdl {

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    default: return 6;
  }
}

constexpr int kUnaryPrec = 7;
constexpr int kAtomPrec = 8;

std::string_view symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "||";
    case BinaryOp::And: return "&&";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
  }
  return "?";
}

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) return precedence(b->op);
  if (std::holds_alternative<Unary>(e.node)) return kUnaryPrec;
  return kAtomPrec;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

void emit_expr(const Expr& e, std::string& out);

void emit_child(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    emit_expr(e, out);
    out += ')';
  } else {
    emit_expr(e, out);
  }
}

void emit_list(const std::vector<ExprPtr>& xs, std::string& out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    emit_expr(*xs[i], out);
  }
}

void emit_expr(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out += format_double(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          out += n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, StringLit>) {
          out += quote(n.value);
        } else if constexpr (std::is_same_v<T, Ident>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          out += n.op == UnaryOp::Neg ? "-" : "!";
          emit_child(*n.operand, kUnaryPrec, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(n.op);
          emit_child(*n.lhs, p, out);
          out += ' ';
          out += symbol(n.op);
          out += ' ';
          emit_child(*n.rhs, p + 1, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          out += n.callee;
          out += '(';
          emit_list(n.args, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Index>) {
          emit_child(*n.target, kAtomPrec, out);
          out += '[';
          emit_expr(*n.index, out);
          out += ']';
        } else {
          out += '[';
          emit_list(n.elements, out);
          out += ']';
        }
      },
      e.node);
}

std::string expr_text(const ExprPtr& e) {
  std::string s;
  emit_expr(*e, s);
  return s;
}

void emit_block(const Block& b, int depth, std::string& out);

void emit_if(const If& s, int depth, std::string& out) {
  out += "if " + expr_text(s.cond) + " {\n";
  emit_block(s.then_block, depth + 1, out);
  out += std::string(2 * depth, ' ') + "}";
  if (!s.else_block) return;
  const auto& eb = *s.else_block;
  if (eb.stmts.size() == 1) {
    if (const auto* nested = std::get_if<If>(&eb.stmts.front()->node)) {
      out += " else ";
      emit_if(*nested, depth, out);
      return;
    }
  }
  out += " else {\n";
  emit_block(eb, depth + 1, out);
  out += std::string(2 * depth, ' ') + "}";
}

void emit_stmt(const Stmt& st, int depth, std::string& out) {
  const std::string indent(2 * depth, ' ');
  out += indent;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Let>) {
          out += "let " + s.name + " = " + expr_text(s.init) + ";";
        } else if constexpr (std::is_same_v<T, Assign>) {
          out += s.name + " = " + expr_text(s.value) + ";";
        } else if constexpr (std::is_same_v<T, For>) {
          out += "for " + s.var + " in range(";
          if (s.start) out += expr_text(s.start) + ", ";
          out += expr_text(s.end) + ") {\n";
          emit_block(s.body, depth + 1, out);
          out += indent + "}";
        } else if constexpr (std::is_same_v<T, If>) {
          emit_if(s, depth, out);
        } else if constexpr (std::is_same_v<T, Emit>) {
          out += "emit(" + expr_text(s.value) + ");";
        } else if constexpr (std::is_same_v<T, Return>) {
          out += "return " + expr_text(s.value) + ";";
        } else {
          out += expr_text(s.expr) + ";";
        }
      },
      st.node);
  out += '\n';
}

void emit_block(const Block& b, int depth, std::string& out) {
  for (const auto& s : b.stmts) emit_stmt(*s, depth, out);
}

std::string value_text(const params::ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return quote(std::get<std::string>(v));
}

std::string param_text(const ParamDecl& p) {
  std::string out = "param " + p.name + ": ";
  if (p.kind.tag == params::KindTag::Choice) {
    out += "choice(";
    for (std::size_t i = 0; i < p.kind.options.size(); ++i) {
      if (i > 0) out += ", ";
      out += quote(p.kind.options[i]);
    }
    out += ")";
  } else {
    out += params::to_string(p.kind.tag);
  }
  if (p.default_value) out += " = " + value_text(*p.default_value);
  if (p.range) out += " in [" + format_double(p.range->min) + ", " + format_double(p.range->max) + "]";
  return out + "\n";
}

}  // namespace

std::string format(const Expr& expr) {
  std::string s;
  emit_expr(expr, s);
  return s;
}

std::string format(const MethodDef& m) {
  std::string out = "method " + m.name + "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += m.params[i].name + ": " + std::string(to_string(m.params[i].type));
  }
  out += ") -> " + std::string(to_string(m.return_type)) + " {\n";
  emit_block(m.body, 1, out);
  return out + "}\n";
}

std::string format(const std::vector<MethodDef>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i > 0) out += "\n";
    out += format(methods[i]);
  }
  return out;
}

std::string format(const Program& program) {
  std::string out;
  for (const auto& p : program.params) out += param_text(p);
  if (!program.params.empty()) out += "\n";
  for (const auto& m : program.methods) out += format(m) + "\n";
  out += "logic {\n";
  if (program.logic) emit_block(*program.logic, 1, out);
  return out + "}\n";
}

}  // namespace parlogue::pdl
