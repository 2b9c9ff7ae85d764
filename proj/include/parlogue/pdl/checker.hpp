#pragma once

#include <cstdint>
#include <vector>

#include "parlogue/params/params.hpp"
#include "parlogue/pdl/ast.hpp"
#include "parlogue/pdl/diagnostic.hpp"
#include "parlogue/pdl/registry.hpp"

namespace parlogue::pdl {

inline constexpr std::uint64_t kMaxLoopIterations = 100'000;
inline constexpr std::size_t kMaxEmittedShapes = 10'000;
inline constexpr std::size_t kMaxCallDepth = 64;

/// Static rules for a whole program: resolution, arity, types, returns,
/// recursion, parameter compatibility with `params`, and literal loop
/// bounds. Returns only errors; the list is empty exactly when the program
/// passes.
std::vector<Diagnostic> check(const Program& program, const MethodRegistry& registry, const params::ParamSet& params);

/// The method rules alone. Calls resolve to `methods` first, then `registry`.
std::vector<Diagnostic> check_methods(const std::vector<MethodDef>& methods, const MethodRegistry& registry);

}  // namespace parlogue::pdl
