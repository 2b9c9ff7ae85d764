#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parlogue/compilesvc/protocol.hpp"
#include "parlogue/pdl/registry.hpp"

namespace parlogue::compilesvc {

/// Canonical source for a registry key, or nullopt when unknown.
using SourceLookup = std::function<std::optional<std::string>(std::string_view key)>;

SourceLookup registry_lookup(const pdl::MethodRegistry& registry);

/// Parses and checks one unit. Dependencies are rebuilt from their sources
/// and must reproduce the requested keys. A method unit must define exactly
/// one method; an Ok method response carries its key. Shared by the worker
/// and the in-process mode, so both produce identical responses.
CompileResponse compile_unit(const CompileRequest& request, const SourceLookup& lookup);

/// Keys of the registered methods reachable from `names`, sorted and
/// without repeats. Names that are not registered are skipped.
std::vector<std::string> dependency_closure(const pdl::MethodRegistry& registry, const std::vector<std::string>& names);

}  // namespace parlogue::compilesvc
