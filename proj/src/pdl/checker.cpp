#include "parlogue/pdl/checker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "parlogue/common/text.hpp"
#include "parlogue/pdl/builtins.hpp"

namespace parlogue::pdl {

namespace {

struct Signature {
  std::vector<SType> params;
  SType result;
};

class Checker {
 public:
  Checker(const std::vector<MethodDef>& methods, const MethodRegistry& registry, const Program* program,
          const params::ParamSet* params)
      : methods_(methods), registry_(registry), program_(program), params_(params) {}

  std::vector<Diagnostic> run() {
    check_method_set();
    if (program_ != nullptr) check_params();
    for (const auto& m : methods_) check_method(m);
    if (program_ != nullptr && program_->logic) check_logic(*program_->logic);
    return std::move(ds_);
  }

 private:
  void report(std::string_view code, std::string message, Span span) {
    ds_.push_back(error(code, std::move(message), span));
  }

  // ---- declarations -------------------------------------------------------

  void check_method_set() {
    std::set<std::string> seen;
    for (const auto& m : methods_) {
      if (is_reserved_name(m.name)) {
        report(code::kReservedName, "'" + m.name + "' is a reserved name", m.span);
      }
      if (!seen.insert(m.name).second) {
        report(code::kDuplicateMethod, "method '" + m.name + "' is defined more than once", m.span);
      }
    }
    check_recursion();
  }

  void check_recursion() {
    std::map<std::string, std::vector<std::string>> graph;
    for (const auto& m : methods_) {
      auto& out = graph[m.name];
      for (const auto& callee : called_methods(m.body)) {
        if (local_method(callee) != nullptr) out.push_back(callee);
      }
    }
    // A method is recursive when it can reach itself.
    for (const auto& m : methods_) {
      std::set<std::string> visited;
      std::vector<std::string> stack(graph[m.name].begin(), graph[m.name].end());
      bool cycle = false;
      while (!stack.empty() && !cycle) {
        auto n = stack.back();
        stack.pop_back();
        if (n == m.name) {
          cycle = true;
        } else if (visited.insert(n).second) {
          for (const auto& c : graph[n]) stack.push_back(c);
        }
      }
      if (cycle) report(code::kRecursion, "method '" + m.name + "' calls itself directly or indirectly", m.span);
    }
  }

  void check_params() {
    std::set<std::string> seen;
    for (const auto& p : program_->params) {
      if (is_reserved_name(p.name)) report(code::kReservedName, "'" + p.name + "' is a reserved name", p.span);
      if (!seen.insert(p.name).second) {
        report(code::kDuplicateParam, "parameter '" + p.name + "' is declared more than once", p.span);
      }
      try {
        params::validate_spec(to_spec(p));
      } catch (const params::ParamError& e) {
        report(code::kParamKind, "parameter '" + p.name + "': " + e.what(), p.span);
      }
    }
  }

  const MethodDef* local_method(std::string_view name) const {
    auto it = std::find_if(methods_.begin(), methods_.end(), [&](const MethodDef& m) { return m.name == name; });
    return it == methods_.end() ? nullptr : &*it;
  }

  std::optional<Signature> user_signature(std::string_view name) const {
    const MethodDef* def = local_method(name);
    if (def == nullptr) {
      if (const auto* r = registry_.find(name)) def = r->def.get();
    }
    if (def == nullptr) return std::nullopt;
    Signature sig;
    for (const auto& p : def->params) sig.params.push_back(static_type(p.type));
    sig.result = static_type(def->return_type);
    return sig;
  }

  // ---- scopes -------------------------------------------------------------

  struct Function {
    bool is_method = false;
    SType return_type = SType::Any;
    std::vector<std::map<std::string, SType>> scopes;
  };

  std::optional<SType> find_local(std::string_view name) const {
    for (auto it = fn_.scopes.rbegin(); it != fn_.scopes.rend(); ++it) {
      auto f = it->find(std::string(name));
      if (f != it->end()) return f->second;
    }
    return std::nullopt;
  }

  const ParamDecl* visible_param(std::string_view name) const {
    if (fn_.is_method || program_ == nullptr) return nullptr;
    return program_->find_param(name);
  }

  void declare_local(const std::string& name, SType type, Span span) {
    if (is_reserved_name(name)) {
      report(code::kReservedName, "'" + name + "' is a reserved name", span);
    } else if (find_local(name) || visible_param(name) != nullptr) {
      report(code::kDuplicateLocal, "'" + name + "' is already defined", span);
    }
    fn_.scopes.back()[name] = type;
  }

  // ---- bodies -------------------------------------------------------------

  void check_method(const MethodDef& m) {
    fn_ = Function{true, static_type(m.return_type), {{}}};
    for (const auto& p : m.params) declare_local(p.name, static_type(p.type), p.span);
    block(m.body);
    if (!always_returns(m.body)) {
      report(code::kMissingReturn, "method '" + m.name + "' does not return on every path", m.span);
    }
  }

  void check_logic(const Block& logic) {
    fn_ = Function{false, SType::Any, {}};
    block(logic);
  }

  static bool always_returns(const Block& b) {
    for (const auto& st : b.stmts) {
      if (std::holds_alternative<Return>(st->node)) return true;
      if (const auto* s = std::get_if<If>(&st->node)) {
        if (s->else_block && always_returns(s->then_block) && always_returns(*s->else_block)) return true;
      }
    }
    return false;
  }

  void block(const Block& b) {
    fn_.scopes.emplace_back();
    for (const auto& st : b.stmts) statement(*st);
    fn_.scopes.pop_back();
  }

  void expect_type(const ExprPtr& e, SType want, std::string_view what) {
    const SType got = expr(*e);
    if (!assignable(got, want)) {
      report(code::kType, std::string(what) + " must be " + std::string(to_string(want)) + ", got " +
                              std::string(to_string(got)),
             e->span);
    }
  }

  void statement(const Stmt& st) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Let>) {
            const SType t = expr(*s.init);
            declare_local(s.name, t, st.span);
          } else if constexpr (std::is_same_v<T, Assign>) {
            const SType t = expr(*s.value);
            if (auto local = find_local(s.name)) {
              if (!assignable(t, *local)) {
                report(code::kType, "cannot assign " + std::string(to_string(t)) + " to '" + s.name + "' of type " +
                                        std::string(to_string(*local)),
                       st.span);
              }
            } else if (visible_param(s.name) != nullptr) {
              report(code::kAssignParam, "parameter '" + s.name + "' cannot be assigned", st.span);
            } else {
              report(code::kUnknownIdent, "unknown variable '" + s.name + "'", st.span);
            }
          } else if constexpr (std::is_same_v<T, For>) {
            if (s.start) expect_type(s.start, SType::Number, "range start");
            expect_type(s.end, SType::Number, "range end");
            loop_bound(s, st.span);
            fn_.scopes.emplace_back();
            declare_local(s.var, SType::Number, st.span);
            block(s.body);
            fn_.scopes.pop_back();
          } else if constexpr (std::is_same_v<T, If>) {
            expect_type(s.cond, SType::Boolean, "condition");
            block(s.then_block);
            if (s.else_block) block(*s.else_block);
          } else if constexpr (std::is_same_v<T, Emit>) {
            const SType t = expr(*s.value);
            if (fn_.is_method) {
              report(code::kEmitInMethod, "methods cannot emit shapes", st.span);
            } else if (!assignable(t, SType::Shape) && t != SType::List) {
              report(code::kType, "emit expects a shape or a list, got " + std::string(to_string(t)), s.value->span);
            }
          } else if constexpr (std::is_same_v<T, Return>) {
            if (!fn_.is_method) {
              expr(*s.value);
              report(code::kReturnOutsideMethod, "return is only allowed inside a method", st.span);
            } else {
              expect_type(s.value, fn_.return_type, "return value");
            }
          } else {
            expr(*s.expr);
          }
        },
        st.node);
  }

  // Folds literal arithmetic; nullopt when not constant.
  static std::optional<double> fold(const Expr& e) {
    if (const auto* n = std::get_if<NumberLit>(&e.node)) return n->value;
    if (const auto* u = std::get_if<Unary>(&e.node); u != nullptr && u->op == UnaryOp::Neg) {
      if (auto v = fold(*u->operand)) return -*v;
      return std::nullopt;
    }
    if (const auto* b = std::get_if<Binary>(&e.node)) {
      auto l = fold(*b->lhs);
      auto r = fold(*b->rhs);
      if (!l || !r) return std::nullopt;
      switch (b->op) {
        case BinaryOp::Add: return *l + *r;
        case BinaryOp::Sub: return *l - *r;
        case BinaryOp::Mul: return *l * *r;
        default: return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Upper bound of a bound expression when it is a literal or a ranged param.
  std::optional<double> upper(const Expr& e) const {
    if (auto v = fold(e)) return v;
    if (const auto* id = std::get_if<Ident>(&e.node)) {
      if (find_local(id->name)) return std::nullopt;
      if (const auto* p = visible_param(id->name); p != nullptr && p->range) return p->range->max;
    }
    return std::nullopt;
  }

  void loop_bound(const For& s, Span span) {
    const auto hi = upper(*s.end);
    if (!hi) return;
    double lo = 0.0;
    if (s.start) {
      auto f = fold(*s.start);
      if (!f) return;
      lo = *f;
    }
    if (!std::isfinite(*hi) || *hi - lo > static_cast<double>(kMaxLoopIterations)) {
      report(code::kLoopBound, "loop may run " + format_double(*hi - lo) + " times, above the cap of " +
                                   std::to_string(kMaxLoopIterations),
             span);
    }
  }

  SType expr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> SType {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            return SType::Number;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return SType::Boolean;
          } else if constexpr (std::is_same_v<T, StringLit>) {
            return SType::String;
          } else if constexpr (std::is_same_v<T, Ident>) {
            return ident(n, e.span);
          } else if constexpr (std::is_same_v<T, Unary>) {
            const SType want = n.op == UnaryOp::Neg ? SType::Number : SType::Boolean;
            expect_type(n.operand, want, n.op == UnaryOp::Neg ? "operand of '-'" : "operand of '!'");
            return want;
          } else if constexpr (std::is_same_v<T, Binary>) {
            return binary(n, e.span);
          } else if constexpr (std::is_same_v<T, Call>) {
            return call(n);
          } else if constexpr (std::is_same_v<T, Index>) {
            expect_type(n.target, SType::List, "indexed value");
            expect_type(n.index, SType::Number, "index");
            return SType::Shape;
          } else {
            for (const auto& el : n.elements) expect_type(el, SType::Shape, "list element");
            return SType::List;
          }
        },
        e.node);
  }

  SType ident(const Ident& n, Span span) {
    if (auto local = find_local(n.name)) return *local;
    if (const auto* p = visible_param(n.name)) return param_type(*p, span);
    if (!fn_.is_method || program_ == nullptr || program_->find_param(n.name) == nullptr) {
      report(code::kUnknownIdent, "unknown identifier '" + n.name + "'", span);
    } else {
      report(code::kUnknownIdent, "'" + n.name + "' is a parameter; methods receive values as arguments", span);
    }
    return SType::Any;
  }

  SType param_type(const ParamDecl& p, Span span) {
    const SType t = static_type(p.kind);
    if (params_ == nullptr || !checked_params_.insert(p.name).second) return t;
    const auto* spec = params_->find(p.name);
    if (spec == nullptr) {
      report(code::kParamMissing, "parameter '" + p.name + "' is not in the session parameter set", span);
    } else if (spec->kind.tag != p.kind.tag && static_type(spec->kind) != t) {
      report(code::kParamKind, "parameter '" + p.name + "' is declared as " + std::string(to_string(p.kind.tag)) +
                                   " but the session has " + std::string(to_string(spec->kind.tag)),
             span);
    }
    return t;
  }

  SType binary(const Binary& n, Span span) {
    switch (n.op) {
      case BinaryOp::Or:
      case BinaryOp::And:
        expect_type(n.lhs, SType::Boolean, "logical operand");
        expect_type(n.rhs, SType::Boolean, "logical operand");
        return SType::Boolean;
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        const SType l = expr(*n.lhs);
        const SType r = expr(*n.rhs);
        const bool scalar = l == SType::Number || l == SType::Boolean || l == SType::String || l == SType::Any;
        if (!scalar || !(l == r || l == SType::Any || r == SType::Any)) {
          report(code::kType, "cannot compare " + std::string(to_string(l)) + " with " + std::string(to_string(r)),
                 span);
        }
        return SType::Boolean;
      }
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        expect_type(n.lhs, SType::Number, "comparison operand");
        expect_type(n.rhs, SType::Number, "comparison operand");
        return SType::Boolean;
      default:
        expect_type(n.lhs, SType::Number, "arithmetic operand");
        expect_type(n.rhs, SType::Number, "arithmetic operand");
        return SType::Number;
    }
  }

  SType call(const Call& n) {
    std::vector<SType> args;
    for (const auto& a : n.args) args.push_back(expr(*a));

    if (n.callee == "loft") return loft(n, args);

    Signature sig;
    SType result;
    if (const auto* b = find_builtin(n.callee)) {
      sig = Signature{b->params, b->result};
      result = b->result;
      if (b->result_from_first && !args.empty() && assignable(args[0], SType::Shape) && args[0] != SType::Any) {
        result = args[0];
      }
    } else if (auto user = user_signature(n.callee)) {
      sig = *user;
      result = sig.result;
    } else {
      report(code::kUnregisteredMethod, "call to '" + n.callee + "', which is not a builtin or a registered method",
             n.callee_span);
      return SType::Any;
    }
    if (args.size() != sig.params.size()) {
      report(code::kArity, "'" + n.callee + "' takes " + std::to_string(sig.params.size()) + " argument" +
                               (sig.params.size() == 1 ? "" : "s") + ", got " + std::to_string(args.size()),
             n.callee_span);
      return result;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!assignable(args[i], sig.params[i])) {
        report(code::kType, "argument " + std::to_string(i + 1) + " of '" + n.callee + "' must be " +
                                std::string(to_string(sig.params[i])) + ", got " + std::string(to_string(args[i])),
               n.args[i]->span);
      }
    }
    return result;
  }

  SType loft(const Call& n, const std::vector<SType>& args) {
    if (args.size() == 1 && assignable(args[0], SType::List)) return SType::Shape;
    if (args.size() < 2) {
      report(code::kArity, "'loft' takes a list of profiles or at least 2 profiles, got " +
                               std::to_string(args.size()) + " argument" + (args.size() == 1 ? "" : "s"),
             n.callee_span);
      return SType::Shape;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!assignable(args[i], SType::Shape)) {
        report(code::kType, "loft profile " + std::to_string(i + 1) + " must be a shape", n.args[i]->span);
      }
    }
    return SType::Shape;
  }

  const std::vector<MethodDef>& methods_;
  const MethodRegistry& registry_;
  const Program* program_;
  const params::ParamSet* params_;
  Function fn_;
  std::set<std::string> checked_params_;
  std::vector<Diagnostic> ds_;
};

}  // namespace

std::vector<Diagnostic> check(const Program& program, const MethodRegistry& registry, const params::ParamSet& params) {
  return Checker(program.methods, registry, &program, &params).run();
}

std::vector<Diagnostic> check_methods(const std::vector<MethodDef>& methods, const MethodRegistry& registry) {
  return Checker(methods, registry, nullptr, nullptr).run();
}

}  // namespace parlogue::pdl
