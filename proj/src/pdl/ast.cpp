#include "parlogue/pdl/ast.hpp"

#include <algorithm>

#include "parlogue/pdl/builtins.hpp"

namespace parlogue::pdl {

std::string_view to_string(TypeName t) {
  switch (t) {
    case TypeName::Number: return "number";
    case TypeName::Integer: return "integer";
    case TypeName::Boolean: return "boolean";
    case TypeName::String: return "string";
    case TypeName::Point: return "point";
    case TypeName::Shape: return "shape";
    case TypeName::List: return "list";
  }
  return "?";
}

std::optional<TypeName> type_name_from_string(std::string_view s) {
  for (auto t : {TypeName::Number, TypeName::Integer, TypeName::Boolean, TypeName::String, TypeName::Point,
                 TypeName::Shape, TypeName::List}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

const MethodDef* Program::find_method(std::string_view name) const {
  auto it = std::find_if(methods.begin(), methods.end(), [&](const MethodDef& m) { return m.name == name; });
  return it == methods.end() ? nullptr : &*it;
}

const ParamDecl* Program::find_param(std::string_view name) const {
  auto it = std::find_if(params.begin(), params.end(), [&](const ParamDecl& p) { return p.name == name; });
  return it == params.end() ? nullptr : &*it;
}

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

namespace {

bool same_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same);
}

struct ExprEq {
  const Expr& other;
  bool operator()(const NumberLit& n) const { return n.value == std::get<NumberLit>(other.node).value; }
  bool operator()(const BoolLit& n) const { return n.value == std::get<BoolLit>(other.node).value; }
  bool operator()(const StringLit& n) const { return n.value == std::get<StringLit>(other.node).value; }
  bool operator()(const Ident& n) const { return n.name == std::get<Ident>(other.node).name; }
  bool operator()(const Unary& n) const {
    const auto& o = std::get<Unary>(other.node);
    return n.op == o.op && same(n.operand, o.operand);
  }
  bool operator()(const Binary& n) const {
    const auto& o = std::get<Binary>(other.node);
    return n.op == o.op && same(n.lhs, o.lhs) && same(n.rhs, o.rhs);
  }
  bool operator()(const Call& n) const {
    const auto& o = std::get<Call>(other.node);
    return n.callee == o.callee && same_list(n.args, o.args);
  }
  bool operator()(const Index& n) const {
    const auto& o = std::get<Index>(other.node);
    return same(n.target, o.target) && same(n.index, o.index);
  }
  bool operator()(const ListLit& n) const { return same_list(n.elements, std::get<ListLit>(other.node).elements); }
};

struct StmtEq {
  const Stmt& other;
  bool operator()(const Let& s) const {
    const auto& o = std::get<Let>(other.node);
    return s.name == o.name && same(s.init, o.init);
  }
  bool operator()(const Assign& s) const {
    const auto& o = std::get<Assign>(other.node);
    return s.name == o.name && same(s.value, o.value);
  }
  bool operator()(const For& s) const {
    const auto& o = std::get<For>(other.node);
    return s.var == o.var && same(s.start, o.start) && same(s.end, o.end) && s.body == o.body;
  }
  bool operator()(const If& s) const {
    const auto& o = std::get<If>(other.node);
    return same(s.cond, o.cond) && s.then_block == o.then_block && s.else_block == o.else_block;
  }
  bool operator()(const Emit& s) const { return same(s.value, std::get<Emit>(other.node).value); }
  bool operator()(const Return& s) const { return same(s.value, std::get<Return>(other.node).value); }
  bool operator()(const ExprStmt& s) const { return same(s.expr, std::get<ExprStmt>(other.node).expr); }
};

void collect_calls(const ExprPtr& e, std::vector<std::string>& out);

void collect_calls(const Block& block, std::vector<std::string>& out) {
  for (const auto& st : block.stmts) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Let>) {
            collect_calls(s.init, out);
          } else if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, Emit> || std::is_same_v<T, Return>) {
            collect_calls(s.value, out);
          } else if constexpr (std::is_same_v<T, For>) {
            collect_calls(s.start, out);
            collect_calls(s.end, out);
            collect_calls(s.body, out);
          } else if constexpr (std::is_same_v<T, If>) {
            collect_calls(s.cond, out);
            collect_calls(s.then_block, out);
            if (s.else_block) collect_calls(*s.else_block, out);
          } else {
            collect_calls(s.expr, out);
          }
        },
        st->node);
  }
}

void collect_calls(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Unary>) {
          collect_calls(n.operand, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_calls(n.lhs, out);
          collect_calls(n.rhs, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (!is_builtin(n.callee) && std::find(out.begin(), out.end(), n.callee) == out.end()) {
            out.push_back(n.callee);
          }
          for (const auto& a : n.args) collect_calls(a, out);
        } else if constexpr (std::is_same_v<T, Index>) {
          collect_calls(n.target, out);
          collect_calls(n.index, out);
        } else if constexpr (std::is_same_v<T, ListLit>) {
          for (const auto& a : n.elements) collect_calls(a, out);
        }
      },
      e->node);
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(ExprEq{b}, a.node);
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(StmtEq{b}, a.node);
}

bool operator==(const Block& a, const Block& b) {
  return std::equal(a.stmts.begin(), a.stmts.end(), b.stmts.begin(), b.stmts.end(),
                    [](const StmtPtr& x, const StmtPtr& y) { return *x == *y; });
}

bool operator==(const ParamDecl& a, const ParamDecl& b) {
  return a.name == b.name && a.kind == b.kind && a.default_value == b.default_value && a.range == b.range;
}

bool operator==(const MethodParam& a, const MethodParam& b) { return a.name == b.name && a.type == b.type; }

bool operator==(const MethodDef& a, const MethodDef& b) {
  return a.name == b.name && a.params == b.params && a.return_type == b.return_type && a.body == b.body;
}

bool operator==(const Program& a, const Program& b) {
  return a.params == b.params && a.methods == b.methods && a.logic == b.logic;
}

params::ParamSpec to_spec(const ParamDecl& decl) {
  params::ParamSpec spec;
  spec.name = decl.name;
  spec.kind = decl.kind;
  spec.range = decl.range;
  if (decl.default_value) spec.default_value = params::coerce_value(decl.kind, decl.range, *decl.default_value);
  return spec;
}

params::ParamSet params_from_program(const Program& program) {
  params::ParamSet set;
  for (const auto& p : program.params) {
    if (set.find(p.name) != nullptr) continue;
    try {
      set.declare(to_spec(p));
    } catch (const params::ParamError&) {
    }
  }
  return set;
}

std::vector<std::string> called_methods(const Block& block) {
  std::vector<std::string> out;
  collect_calls(block, out);
  return out;
}

ExprPtr make_expr(decltype(Expr::node) node, Span span) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}

StmtPtr make_stmt(decltype(Stmt::node) node, Span span) {
  return std::make_shared<const Stmt>(Stmt{std::move(node), span});
}

}  // namespace parlogue::pdl
