#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parlogue/agents/envelope.hpp"
#include "parlogue/pdl/diagnostic.hpp"

namespace parlogue::cli {

/// Seeded static-fault operators for PDL sources.
///   rename_ident   one reference to a name misspelled     -> E_UNKNOWN_IDENT
///   break_arity    one call loses its last argument
///                  (or gains one when it has none)        -> E_ARITY
///   drop_param     one referenced param declaration gone  -> E_UNKNOWN_IDENT
///   corrupt_token  one closing or separating token gone   -> E_SYNTAX
enum class MutationOp { RenameIdent, BreakArity, DropParam, CorruptToken };

std::string_view to_string(MutationOp op);
MutationOp mutation_op_from_string(std::string_view s);  // throws std::invalid_argument
const std::vector<MutationOp>& all_mutation_ops();

struct Mutation {
  MutationOp op = MutationOp::RenameIdent;
  std::string unit;  // "program", "logic" or "method:<i>"
  pdl::Span span;    // the mutated site in the original unit
  std::string before;
  std::string after;
  std::string expected_code;
};

/// {"op","unit","span":{line,col,len,offset},"before","after","expected_code"}
nlohmann::json to_json(const Mutation& m);

class NoApplicableSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mutant {
  std::string source;
  Mutation mutation;
};

/// Exactly one mutation, chosen by `seed` among the operator's sites.
/// Throws std::invalid_argument when the source does not parse and
/// NoApplicableSite when the operator has nowhere to apply.
Mutant mutate_source(std::string_view source, MutationOp op, std::uint64_t seed, std::string unit = "program");

struct MutatedCandidate {
  agents::CaOutput output;
  Mutation mutation;
};

/// Mutates one unit of a coding-agent output; sites of every method and the
/// logic are pooled before the seeded choice.
MutatedCandidate mutate_candidate(const agents::CaOutput& candidate, MutationOp op, std::uint64_t seed);

}  // namespace parlogue::cli
