#include "parlogue/pdl/interpreter.hpp"

#include <cmath>
#include <map>

#include "parlogue/common/text.hpp"
#include "parlogue/pdl/builtins.hpp"

namespace parlogue::pdl {

namespace {

namespace geo = parlogue::geometry;

struct EvalError {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(std::string_view code, std::string message, Span span) {
  throw EvalError{error(code, std::move(message), span)};
}

double whole(double v, std::string_view what, Span span) {
  if (!std::isfinite(v) || std::trunc(v) != v) fail(code::kRuntimeDomain, std::string(what) + " must be a whole number, got " + format_double(v), span);
  return v;
}

class Interpreter {
 public:
  Interpreter(const Program& program, const params::ParamSet& params, const MethodRegistry& registry,
              const geo::ShapeRegistry& shapes, std::uint64_t seed, const EvalLimits& limits)
      : program_(program), params_(params), registry_(registry), shapes_(shapes), seed_(seed), limits_(limits) {}

  EvalResult run() {
    frames_.push_back(Frame{nullptr, {{}}});
    if (program_.logic) exec_block(*program_.logic);
    return std::move(result_);
  }

 private:
  struct Frame {
    const MethodDef* method;  // null for logic
    std::vector<std::map<std::string, Value, std::less<>>> scopes;
  };

  Frame& frame() { return frames_.back(); }

  Value* find_local(std::string_view name) {
    auto& scopes = frame().scopes;
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  Value param_value(const ParamDecl& decl, Span span) {
    if (auto it = param_cache_.find(decl.name); it != param_cache_.end()) return it->second;
    const auto* spec = params_.find(decl.name);
    if (spec == nullptr || spec->status != params::ParamStatus::Confirmed) {
      fail(code::kParamMissing, "parameter '" + decl.name + "' has no confirmed value", span);
    }
    Value v;
    if (spec->kind.is_reference()) {
      if (!spec->ref || !shapes_.contains(*spec->ref)) {
        fail(code::kUnresolvedRef, "parameter '" + decl.name + "' refers to a shape that no longer exists", span);
      }
      geo::Shape s = shapes_.get(*spec->ref);
      if (spec->kind.tag == params::KindTag::PointRef && s.kind() != geo::ShapeKind::Point) {
        fail(code::kUnresolvedRef, "parameter '" + decl.name + "' must refer to a point", span);
      }
      v = std::move(s);
    } else {
      v = std::visit(
          [](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
              return static_cast<double>(x);
            } else {
              return x;
            }
          },
          *spec->value);
    }
    if (dynamic_type(v) != static_type(decl.kind) && !(static_type(decl.kind) == SType::Shape && dynamic_type(v) == SType::Point)) {
      fail(code::kParamKind, "parameter '" + decl.name + "' does not match its declared kind", span);
    }
    param_cache_[decl.name] = v;
    return v;
  }

  // ---- statements ---------------------------------------------------------

  // Returns a value when a `return` executed.
  std::optional<Value> exec_block(const Block& b) {
    frame().scopes.emplace_back();
    std::optional<Value> ret;
    for (const auto& st : b.stmts) {
      ret = exec(*st);
      if (ret) break;
    }
    frame().scopes.pop_back();
    return ret;
  }

  std::optional<Value> exec(const Stmt& st) {
    ++result_.stats.statements;
    return std::visit(
        [&](const auto& s) -> std::optional<Value> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Let>) {
            frame().scopes.back()[s.name] = eval(*s.init);
          } else if constexpr (std::is_same_v<T, Assign>) {
            Value v = eval(*s.value);
            if (Value* slot = find_local(s.name)) {
              if (!assignable(dynamic_type(v), dynamic_type(*slot)) &&
                  !(dynamic_type(*slot) == SType::Point && dynamic_type(v) == SType::Shape)) {
                fail(code::kType, "cannot assign " + describe(v) + " to '" + s.name + "'", st.span);
              }
              *slot = std::move(v);
            } else if (frame().method == nullptr && program_.find_param(s.name) != nullptr) {
              fail(code::kAssignParam, "parameter '" + s.name + "' cannot be assigned", st.span);
            } else {
              fail(code::kUnknownIdent, "unknown variable '" + s.name + "'", st.span);
            }
          } else if constexpr (std::is_same_v<T, For>) {
            return exec_for(s, st.span);
          } else if constexpr (std::is_same_v<T, If>) {
            const Value c = eval(*s.cond);
            const auto* b = std::get_if<bool>(&c);
            if (b == nullptr) fail(code::kType, "condition must be boolean, got " + describe(c), s.cond->span);
            if (*b) return exec_block(s.then_block);
            if (s.else_block) return exec_block(*s.else_block);
          } else if constexpr (std::is_same_v<T, Emit>) {
            if (frame().method != nullptr) fail(code::kEmitInMethod, "methods cannot emit shapes", st.span);
            emit(eval(*s.value), st.span, s.value->span);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (frame().method == nullptr) fail(code::kReturnOutsideMethod, "return is only allowed inside a method", st.span);
            return eval(*s.value);
          } else {
            eval(*s.expr);
          }
          return std::nullopt;
        },
        st.node);
  }

  std::optional<Value> exec_for(const For& s, Span span) {
    auto bound = [&](const ExprPtr& e) {
      const Value v = eval(*e);
      const auto* d = std::get_if<double>(&v);
      if (d == nullptr) fail(code::kType, "range bound must be a number, got " + describe(v), e->span);
      return whole(*d, "range bound", e->span);
    };
    const double start = s.start ? bound(s.start) : 0.0;
    const double end = bound(s.end);
    for (double i = start; i < end; i += 1.0) {
      if (++result_.stats.loop_iterations > limits_.loop_iterations) {
        fail(code::kCapExceeded, "loop iterations exceed the cap of " + std::to_string(limits_.loop_iterations), span);
      }
      frame().scopes.emplace_back();
      frame().scopes.back()[s.var] = i;
      auto ret = exec_block(s.body);
      frame().scopes.pop_back();
      if (ret) return ret;
    }
    return std::nullopt;
  }

  void emit(const Value& v, Span stmt_span, Span value_span) {
    auto push = [&](const geo::Shape& shape) {
      if (result_.shapes.size() >= limits_.emitted_shapes) {
        fail(code::kCapExceeded, "emitted shapes exceed the cap of " + std::to_string(limits_.emitted_shapes), stmt_span);
      }
      result_.shapes.push_back(shape);
      result_.provenance.push_back(stmt_span);
    };
    if (const auto* s = std::get_if<geo::Shape>(&v)) {
      push(*s);
    } else if (const auto* l = std::get_if<List>(&v)) {
      for (const auto& s2 : *l) push(s2);
    } else {
      fail(code::kType, "emit expects a shape or a list, got " + describe(v), value_span);
    }
  }

  // ---- expressions --------------------------------------------------------

  Value eval(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, StringLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, Ident>) {
            if (Value* v = find_local(n.name)) return *v;
            if (frame().method == nullptr) {
              if (const auto* p = program_.find_param(n.name)) return param_value(*p, e.span);
            }
            fail(code::kUnknownIdent, "unknown identifier '" + n.name + "'", e.span);
          } else if constexpr (std::is_same_v<T, Unary>) {
            const Value v = eval(*n.operand);
            if (n.op == UnaryOp::Neg) {
              const auto* d = std::get_if<double>(&v);
              if (d == nullptr) fail(code::kType, "operand of '-' must be a number", n.operand->span);
              return -*d;
            }
            const auto* b = std::get_if<bool>(&v);
            if (b == nullptr) fail(code::kType, "operand of '!' must be boolean", n.operand->span);
            return !*b;
          } else if constexpr (std::is_same_v<T, Binary>) {
            return binary(n, e.span);
          } else if constexpr (std::is_same_v<T, Call>) {
            return call(n);
          } else if constexpr (std::is_same_v<T, Index>) {
            const Value target = eval(*n.target);
            const Value index = eval(*n.index);
            const auto* l = std::get_if<List>(&target);
            const auto* d = std::get_if<double>(&index);
            if (l == nullptr) fail(code::kType, "only lists can be indexed", n.target->span);
            if (d == nullptr) fail(code::kType, "index must be a number", n.index->span);
            const double i = whole(*d, "index", n.index->span);
            if (i < 0 || i >= static_cast<double>(l->size())) {
              fail(code::kRuntimeDomain, "index " + format_double(i) + " is out of bounds for a list of " + std::to_string(l->size()), e.span);
            }
            return (*l)[static_cast<std::size_t>(i)];
          } else {
            List out;
            for (const auto& el : n.elements) {
              Value v = eval(*el);
              auto* s = std::get_if<geo::Shape>(&v);
              if (s == nullptr) fail(code::kType, "list elements must be shapes, got " + describe(v), el->span);
              out.push_back(std::move(*s));
            }
            return out;
          }
        },
        e.node);
  }

  Value binary(const Binary& n, Span span) {
    if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
      auto boolean = [&](const ExprPtr& x) {
        const Value v = eval(*x);
        const auto* b = std::get_if<bool>(&v);
        if (b == nullptr) fail(code::kType, "logical operand must be boolean, got " + describe(v), x->span);
        return *b;
      };
      const bool l = boolean(n.lhs);
      if (n.op == BinaryOp::And && !l) return false;
      if (n.op == BinaryOp::Or && l) return true;
      return boolean(n.rhs);
    }
    const Value l = eval(*n.lhs);
    const Value r = eval(*n.rhs);
    if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) {
      const bool scalar = l.index() == r.index() && l.index() <= 2;
      if (!scalar) fail(code::kType, "cannot compare " + describe(l) + " with " + describe(r), span);
      return (l == r) == (n.op == BinaryOp::Eq);
    }
    const auto* a = std::get_if<double>(&l);
    const auto* b = std::get_if<double>(&r);
    if (a == nullptr) fail(code::kType, "operand must be a number, got " + describe(l), n.lhs->span);
    if (b == nullptr) fail(code::kType, "operand must be a number, got " + describe(r), n.rhs->span);
    double out = 0.0;
    switch (n.op) {
      case BinaryOp::Lt: return *a < *b;
      case BinaryOp::Le: return *a <= *b;
      case BinaryOp::Gt: return *a > *b;
      case BinaryOp::Ge: return *a >= *b;
      case BinaryOp::Add: out = *a + *b; break;
      case BinaryOp::Sub: out = *a - *b; break;
      case BinaryOp::Mul: out = *a * *b; break;
      case BinaryOp::Div:
        if (*b == 0.0) fail(code::kRuntimeDomain, "division by zero", span);
        out = *a / *b;
        break;
      default:
        if (*b == 0.0) fail(code::kRuntimeDomain, "modulo by zero", span);
        out = std::fmod(*a, *b);
        break;
    }
    if (!std::isfinite(out)) fail(code::kRuntimeDomain, "arithmetic overflow", span);
    return out;
  }

  Value call(const Call& n) {
    ++result_.stats.calls;
    std::vector<Value> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(eval(*a));

    if (is_builtin(n.callee)) {
      try {
        return call_builtin(n.callee, args, seed_);
      } catch (const RuntimeFault& f) {
        fail(f.code(), f.what(), n.callee_span);
      }
    }
    const MethodDef* def = program_.find_method(n.callee);
    if (def == nullptr) {
      if (const auto* r = registry_.find(n.callee)) def = r->def.get();
    }
    if (def == nullptr) fail(code::kUnregisteredMethod, "call to unregistered method '" + n.callee + "'", n.callee_span);
    return invoke(*def, std::move(args), n.callee_span);
  }

  static void check_value(const Value& v, TypeName t, const std::string& what, Span span) {
    if (!assignable(dynamic_type(v), static_type(t))) {
      fail(code::kType, what + " must be " + std::string(to_string(t)) + ", got " + describe(v), span);
    }
    if (t == TypeName::Integer) whole(std::get<double>(v), what, span);
  }

  Value invoke(const MethodDef& def, std::vector<Value> args, Span span) {
    if (args.size() != def.params.size()) {
      fail(code::kArity, "'" + def.name + "' takes " + std::to_string(def.params.size()) + " arguments, got " +
                             std::to_string(args.size()),
           span);
    }
    if (frames_.size() > limits_.call_depth) {
      fail(code::kCapExceeded, "call depth exceeds the cap of " + std::to_string(limits_.call_depth), span);
    }
    Frame f{&def, {{}}};
    for (std::size_t i = 0; i < args.size(); ++i) {
      check_value(args[i], def.params[i].type, "argument '" + def.params[i].name + "' of '" + def.name + "'", span);
      f.scopes.back()[def.params[i].name] = std::move(args[i]);
    }
    frames_.push_back(std::move(f));
    auto ret = exec_block(def.body);
    frames_.pop_back();
    if (!ret) fail(code::kMissingReturn, "method '" + def.name + "' finished without returning", span);
    check_value(*ret, def.return_type, "return value of '" + def.name + "'", span);
    return std::move(*ret);
  }

  const Program& program_;
  const params::ParamSet& params_;
  const MethodRegistry& registry_;
  const geo::ShapeRegistry& shapes_;
  std::uint64_t seed_;
  EvalLimits limits_;
  std::vector<Frame> frames_;
  std::map<std::string, Value, std::less<>> param_cache_;
  EvalResult result_;
};

}  // namespace

EvalOutcome evaluate(const Program& program, const params::ParamSet& params, const MethodRegistry& registry,
                     const geometry::ShapeRegistry& shapes, std::uint64_t seed, const EvalLimits& limits) {
  EvalOutcome out;
  try {
    out.result = Interpreter(program, params, registry, shapes, seed, limits).run();
  } catch (const EvalError& e) {
    out.diagnostics.push_back(e.diagnostic);
  }
  return out;
}

}  // namespace parlogue::pdl
