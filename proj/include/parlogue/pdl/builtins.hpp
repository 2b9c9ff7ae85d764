#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parlogue/geometry/shape.hpp"
#include "parlogue/pdl/ast.hpp"

namespace parlogue::pdl {

/// Static types. Point is a subtype of Shape. Any is produced after an error
/// so one fault does not cascade.
enum class SType { Number, Boolean, String, Point, Shape, List, Any };

std::string_view to_string(SType t);
bool assignable(SType from, SType to);
SType static_type(TypeName t);
/// Logic-visible type of a parameter kind.
SType static_type(const params::ParamKind& kind);

struct BuiltinSig {
  std::string_view name;
  std::vector<SType> params;
  SType result = SType::Shape;
  /// Transforms return the static type of their first argument.
  bool result_from_first = false;
};

/// Null when `name` is not a builtin.
const BuiltinSig* find_builtin(std::string_view name);
bool is_builtin(std::string_view name);
const std::vector<BuiltinSig>& all_builtins();

/// Builtins, keywords, type names and `range`.
bool is_reserved_name(std::string_view name);

using List = std::vector<geometry::Shape>;
using Value = std::variant<double, bool, std::string, geometry::Shape, List>;

SType dynamic_type(const Value& v);
std::string describe(const Value& v);

/// Raised by builtins and the interpreter; carries a diagnostic code.
class RuntimeFault : public std::runtime_error {
 public:
  RuntimeFault(std::string_view code, const std::string& what) : std::runtime_error(what), code_(code) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Checks arity and argument types dynamically, then runs the builtin.
/// `eval_seed` is mixed into distribute_random's argument seed.
/// Errors: RuntimeFault (E_ARITY, E_TYPE, E_RUNTIME_DOMAIN).
Value call_builtin(std::string_view name, const std::vector<Value>& args, std::uint64_t eval_seed);

/// Combines the evaluation seed with a per-call seed through std::seed_seq.
std::uint64_t mix_seed(std::uint64_t eval_seed, std::uint64_t call_seed);

}  // namespace parlogue::pdl
