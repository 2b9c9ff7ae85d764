#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parlogue/geometry/registry.hpp"
#include "parlogue/geometry/shape.hpp"
#include "parlogue/params/params.hpp"
#include "parlogue/pdl/ast.hpp"
#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/registry.hpp"

namespace parlogue::pdl {

struct EvalLimits {
  std::uint64_t loop_iterations = kMaxLoopIterations;
  std::size_t emitted_shapes = kMaxEmittedShapes;
  std::size_t call_depth = kMaxCallDepth;
};

struct EvalStats {
  std::uint64_t statements = 0;
  std::uint64_t loop_iterations = 0;
  std::uint64_t calls = 0;

  friend bool operator==(const EvalStats&, const EvalStats&) = default;
};

struct EvalResult {
  std::vector<geometry::Shape> shapes;  // emit order
  std::vector<Span> provenance;         // emitting statement, one per shape
  EvalStats stats;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

struct EvalOutcome {
  std::optional<EvalResult> result;
  std::vector<Diagnostic> diagnostics;  // one runtime error when result is empty

  bool ok() const { return result.has_value(); }
};

/// Runs the logic block. Parameters take their confirmed values from
/// `params`; reference parameters resolve through `shapes`. Calls resolve
/// to builtins, then `program.methods`, then `registry`.
///
/// The interpreter re-checks types and arity dynamically, so a program that
/// skipped `check` fails with the matching static code rather than
/// misbehaving. Runtime codes: E_RUNTIME_DOMAIN, E_CAP_EXCEEDED,
/// E_UNRESOLVED_REF, E_PARAM_MISSING.
EvalOutcome evaluate(const Program& program, const params::ParamSet& params, const MethodRegistry& registry,
                     const geometry::ShapeRegistry& shapes, std::uint64_t seed, const EvalLimits& limits = {});

}  // namespace parlogue::pdl
