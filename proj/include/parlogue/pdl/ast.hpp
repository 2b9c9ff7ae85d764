#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parlogue/params/params.hpp"
#include "parlogue/pdl/diagnostic.hpp"

namespace parlogue::pdl {

// Nodes are immutable and shared. Equality is structural and ignores spans.

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct NumberLit {
  double value = 0.0;
};
struct BoolLit {
  bool value = false;
};
struct StringLit {
  std::string value;
};
struct Ident {
  std::string name;
};

enum class UnaryOp { Neg, Not };
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Call {
  std::string callee;
  Span callee_span;
  std::vector<ExprPtr> args;
};

struct Index {
  ExprPtr target;
  ExprPtr index;
};

struct ListLit {
  std::vector<ExprPtr> elements;
};

struct Expr {
  std::variant<NumberLit, BoolLit, StringLit, Ident, Unary, Binary, Call, Index, ListLit> node;
  Span span;
};

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Let {
  std::string name;
  ExprPtr init;
};
struct Assign {
  std::string name;
  ExprPtr value;
};
/// `for var in range(end)` or `for var in range(start, end)`.
struct For {
  std::string var;
  ExprPtr start;  // null for the one-argument form
  ExprPtr end;
  Block body;
};
/// An `else if` chain is an else block holding a single If.
struct If {
  ExprPtr cond;
  Block then_block;
  std::optional<Block> else_block;
};
struct Emit {
  ExprPtr value;
};
struct Return {
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr expr;
};

struct Stmt {
  std::variant<Let, Assign, For, If, Emit, Return, ExprStmt> node;
  Span span;
};

enum class TypeName { Number, Integer, Boolean, String, Point, Shape, List };

std::string_view to_string(TypeName t);
std::optional<TypeName> type_name_from_string(std::string_view s);

struct ParamDecl {
  std::string name;
  params::ParamKind kind;
  std::optional<params::ParamValue> default_value;
  std::optional<params::Range> range;
  Span span;
};

struct MethodParam {
  std::string name;
  TypeName type;
  Span span;
};

struct MethodDef {
  std::string name;
  std::vector<MethodParam> params;
  TypeName return_type = TypeName::Shape;
  Block body;
  Span span;  // the method name
};

struct Program {
  std::vector<ParamDecl> params;
  std::vector<MethodDef> methods;
  std::optional<Block> logic;

  const MethodDef* find_method(std::string_view name) const;
  const ParamDecl* find_param(std::string_view name) const;
};

bool operator==(const Expr& a, const Expr& b);
bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const Block& a, const Block& b);
bool operator==(const ParamDecl& a, const ParamDecl& b);
bool operator==(const MethodParam& a, const MethodParam& b);
bool operator==(const MethodDef& a, const MethodDef& b);
bool operator==(const Program& a, const Program& b);

/// Pointer-aware structural equality (null equals null).
bool same(const ExprPtr& a, const ExprPtr& b);

/// ParamSpec for a declaration: the default is coerced to the kind.
/// Errors: params::ParamError.
params::ParamSpec to_spec(const ParamDecl& decl);

/// A ParamSet with the declarations of `program`, in order. Invalid and
/// repeated declarations are skipped; `check` reports them.
params::ParamSet params_from_program(const Program& program);

/// Names of every non-builtin callee reachable from `block`, in first-use
/// order.
std::vector<std::string> called_methods(const Block& block);

ExprPtr make_expr(decltype(Expr::node) node, Span span = {});
StmtPtr make_stmt(decltype(Stmt::node) node, Span span = {});

}  // namespace parlogue::pdl
