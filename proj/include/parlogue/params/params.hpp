#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "parlogue/geometry/registry.hpp"

namespace parlogue::params {

using geometry::ShapeId;

enum class KindTag { Number, Integer, Boolean, Choice, PointRef, CurveRef, ShapeRef };

/// Parameter type. The list of tags is extensible; `options` is used only by
/// Choice and holds at least two distinct entries.
struct ParamKind {
  KindTag tag = KindTag::Number;
  std::vector<std::string> options;

  static ParamKind choice(std::vector<std::string> options) { return {KindTag::Choice, std::move(options)}; }

  bool is_reference() const {
    return tag == KindTag::PointRef || tag == KindTag::CurveRef || tag == KindTag::ShapeRef;
  }
  bool is_numeric() const { return tag == KindTag::Number || tag == KindTag::Integer; }

  friend bool operator==(const ParamKind&, const ParamKind&) = default;
};

/// Every kind in declaration order, with its wire name.
const std::vector<KindTag>& all_kind_tags();
std::string_view to_string(KindTag tag);
std::optional<KindTag> kind_tag_from_string(std::string_view name);

/// Number -> double, Integer -> int64, Boolean -> bool, Choice -> string.
using ParamValue = std::variant<double, std::int64_t, bool, std::string>;

/// Inclusive bounds; numeric kinds only.
struct Range {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

enum class ParamStatus { Pending, Confirmed };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::optional<Range> range;
  std::optional<ParamValue> default_value;
  ParamStatus status = ParamStatus::Pending;
  std::optional<ParamValue> value;
  std::optional<ShapeId> ref;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

enum class UpdateSource { User, Agent };

struct ParamUpdate {
  std::string name;
  std::optional<ParamValue> value;
  std::optional<ShapeId> ref;
  UpdateSource source = UpdateSource::User;

  friend bool operator==(const ParamUpdate&, const ParamUpdate&) = default;
};

enum class ParamErrc { DuplicateName, InvalidRange, UnknownParam, OutOfRange, KindMismatch, UnknownShapeId, InvalidSpec };

std::string_view to_string(ParamErrc code);

class ParamError : public std::runtime_error {
 public:
  ParamError(ParamErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ParamErrc code() const noexcept { return code_; }

 private:
  ParamErrc code_;
};

/// Result of validate_complete: `missing` lists pending names in
/// declaration order and is empty exactly when everything is confirmed.
struct Completeness {
  std::vector<std::string> missing;
  bool confirmed() const { return missing.empty(); }
};

bool is_valid_identifier(std::string_view name);

/// Converts `value` to the canonical representation for `kind`, checking the
/// range. Integer accepts whole doubles; Number widens integers.
/// Errors: KindMismatch, OutOfRange.
ParamValue coerce_value(const ParamKind& kind, const std::optional<Range>& range, const ParamValue& value);

/// Ordered set of parameter specs with unique names. Mutators give the
/// strong exception guarantee.
class ParamSet {
 public:
  /// Appends `spec`. The spec starts Pending unless it carries a valid
  /// default, in which case it is Confirmed with value = default.
  /// Errors: DuplicateName, InvalidRange, InvalidSpec, OutOfRange, KindMismatch.
  void declare(ParamSpec spec);

  /// Errors: UnknownParam, OutOfRange, KindMismatch, UnknownShapeId.
  void apply_update(const ParamUpdate& update, const geometry::ShapeRegistry& shapes);

  /// Replaces the definition of an existing parameter in place, keeping its
  /// position. Used when the reasoning agent revises a kind or range.
  void redefine(ParamSpec spec);

  /// Appends a spec verbatim (status and value included) after checking its
  /// invariants. Used when reading a set back from JSON.
  /// Errors: DuplicateName and everything validate_spec reports.
  void restore(ParamSpec spec);

  Completeness validate_complete() const;

  const ParamSpec* find(std::string_view name) const;
  const std::vector<ParamSpec>& specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  bool empty() const { return specs_.empty(); }

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  ParamSpec normalized(ParamSpec spec) const;

  std::vector<ParamSpec> specs_;
};

/// Checks every invariant of a single spec. Errors as for declare.
void validate_spec(const ParamSpec& spec);

// JSON wire form: {"name","kind","range","default","status","value","ref"}
// plus "options" for choice kinds. Missing optional keys read as null;
// unknown keys are rejected.
nlohmann::json to_json(const ParamSpec& spec);
ParamSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ParamSet& set);
ParamSet set_from_json(const nlohmann::json& j);
nlohmann::json value_to_json(const ParamValue& value);
ParamValue value_from_json(const nlohmann::json& j);

/// {"name", "value"?, "ref"?, "source"?}
nlohmann::json to_json(const ParamUpdate& update);
ParamUpdate update_from_json(const nlohmann::json& j);

}  // namespace parlogue::params
