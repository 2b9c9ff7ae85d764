#include "parlogue/params/params.hpp"

#include <algorithm>
#include <cmath>

namespace parlogue::params {

const std::vector<KindTag>& all_kind_tags() {
  static const std::vector<KindTag> tags{KindTag::Number,   KindTag::Integer,  KindTag::Boolean, KindTag::Choice,
                                         KindTag::PointRef, KindTag::CurveRef, KindTag::ShapeRef};
  return tags;
}

std::string_view to_string(KindTag tag) {
  switch (tag) {
    case KindTag::Number: return "number";
    case KindTag::Integer: return "integer";
    case KindTag::Boolean: return "boolean";
    case KindTag::Choice: return "choice";
    case KindTag::PointRef: return "point_ref";
    case KindTag::CurveRef: return "curve_ref";
    case KindTag::ShapeRef: return "shape_ref";
  }
  return "?";
}

std::optional<KindTag> kind_tag_from_string(std::string_view name) {
  for (auto tag : all_kind_tags()) {
    if (to_string(tag) == name) return tag;
  }
  return std::nullopt;
}

std::string_view to_string(ParamErrc code) {
  switch (code) {
    case ParamErrc::DuplicateName: return "DuplicateName";
    case ParamErrc::InvalidRange: return "InvalidRange";
    case ParamErrc::UnknownParam: return "UnknownParam";
    case ParamErrc::OutOfRange: return "OutOfRange";
    case ParamErrc::KindMismatch: return "KindMismatch";
    case ParamErrc::UnknownShapeId: return "UnknownShapeId";
    case ParamErrc::InvalidSpec: return "InvalidSpec";
  }
  return "?";
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

namespace {

void check_range(const std::optional<Range>& range, double v, const std::string& shown) {
  if (range && (v < range->min || v > range->max)) {
    throw ParamError(ParamErrc::OutOfRange, shown + " is outside [" + std::to_string(range->min) + ", " +
                                                std::to_string(range->max) + "]");
  }
}

[[noreturn]] void mismatch(const ParamKind& kind) {
  throw ParamError(ParamErrc::KindMismatch, "value does not fit kind " + std::string(to_string(kind.tag)));
}

}  // namespace

ParamValue coerce_value(const ParamKind& kind, const std::optional<Range>& range, const ParamValue& value) {
  switch (kind.tag) {
    case KindTag::Number: {
      double v = 0.0;
      if (const auto* d = std::get_if<double>(&value)) {
        v = *d;
      } else if (const auto* i = std::get_if<std::int64_t>(&value)) {
        v = static_cast<double>(*i);
      } else {
        mismatch(kind);
      }
      if (!std::isfinite(v)) mismatch(kind);
      check_range(range, v, std::to_string(v));
      return v;
    }
    case KindTag::Integer: {
      std::int64_t v = 0;
      if (const auto* i = std::get_if<std::int64_t>(&value)) {
        v = *i;
      } else if (const auto* d = std::get_if<double>(&value);
                 d != nullptr && std::isfinite(*d) && std::trunc(*d) == *d && std::abs(*d) < 9.0e15) {
        v = static_cast<std::int64_t>(*d);
      } else {
        mismatch(kind);
      }
      check_range(range, static_cast<double>(v), std::to_string(v));
      return v;
    }
    case KindTag::Boolean:
      if (!std::holds_alternative<bool>(value)) mismatch(kind);
      return value;
    case KindTag::Choice: {
      const auto* s = std::get_if<std::string>(&value);
      if (s == nullptr) mismatch(kind);
      if (std::find(kind.options.begin(), kind.options.end(), *s) == kind.options.end()) {
        throw ParamError(ParamErrc::OutOfRange, "'" + *s + "' is not one of the choice options");
      }
      return value;
    }
    case KindTag::PointRef:
    case KindTag::CurveRef:
    case KindTag::ShapeRef:
      mismatch(kind);
  }
  mismatch(kind);
}

void validate_spec(const ParamSpec& spec) {
  if (!is_valid_identifier(spec.name)) {
    throw ParamError(ParamErrc::InvalidSpec, "'" + spec.name + "' is not a valid parameter name");
  }
  if (spec.kind.tag == KindTag::Choice) {
    std::vector<std::string> distinct = spec.kind.options;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2 || distinct.size() != spec.kind.options.size()) {
      throw ParamError(ParamErrc::InvalidSpec, spec.name + ": choice needs at least 2 distinct options");
    }
  } else if (!spec.kind.options.empty()) {
    throw ParamError(ParamErrc::InvalidSpec, spec.name + ": options are only valid for choice kinds");
  }
  if (spec.range) {
    if (!spec.kind.is_numeric()) throw ParamError(ParamErrc::InvalidSpec, spec.name + ": range on a non-numeric kind");
    if (!std::isfinite(spec.range->min) || !std::isfinite(spec.range->max)) {
      throw ParamError(ParamErrc::InvalidRange, spec.name + ": range bounds must be finite");
    }
    if (spec.range->min > spec.range->max) throw ParamError(ParamErrc::InvalidRange, spec.name + ": min > max");
  }
  if (spec.kind.is_reference()) {
    if (spec.value || spec.default_value) throw ParamError(ParamErrc::KindMismatch, spec.name + ": reference kinds hold refs");
    if (spec.status == ParamStatus::Confirmed && !spec.ref) {
      throw ParamError(ParamErrc::InvalidSpec, spec.name + ": confirmed reference without a ref");
    }
  } else {
    if (spec.ref) throw ParamError(ParamErrc::KindMismatch, spec.name + ": only reference kinds hold refs");
    if (spec.status == ParamStatus::Confirmed && !spec.value) {
      throw ParamError(ParamErrc::InvalidSpec, spec.name + ": confirmed without a value");
    }
    if (spec.value) coerce_value(spec.kind, spec.range, *spec.value);
  }
  if (spec.default_value) coerce_value(spec.kind, spec.range, *spec.default_value);
}

ParamSpec ParamSet::normalized(ParamSpec spec) const {
  spec.value.reset();
  spec.ref.reset();
  spec.status = ParamStatus::Pending;
  if (spec.default_value) {
    spec.default_value = coerce_value(spec.kind, spec.range, *spec.default_value);
    spec.value = spec.default_value;
    spec.status = ParamStatus::Confirmed;
  }
  validate_spec(spec);
  return spec;
}

void ParamSet::declare(ParamSpec spec) {
  if (find(spec.name) != nullptr) throw ParamError(ParamErrc::DuplicateName, spec.name + " is already declared");
  specs_.push_back(normalized(std::move(spec)));
}

void ParamSet::restore(ParamSpec spec) {
  if (find(spec.name) != nullptr) throw ParamError(ParamErrc::DuplicateName, spec.name + " is already declared");
  validate_spec(spec);
  specs_.push_back(std::move(spec));
}

void ParamSet::redefine(ParamSpec spec) {
  auto it = std::find_if(specs_.begin(), specs_.end(), [&](const ParamSpec& s) { return s.name == spec.name; });
  if (it == specs_.end()) throw ParamError(ParamErrc::UnknownParam, spec.name + " is not declared");
  ParamSpec next = normalized(std::move(spec));
  // Keep a confirmed binding that is still valid under the new definition.
  if (it->status == ParamStatus::Confirmed && next.status == ParamStatus::Pending) {
    if (it->ref && next.kind.tag == it->kind.tag) {
      next.ref = it->ref;
      next.status = ParamStatus::Confirmed;
    } else if (it->value && !next.kind.is_reference()) {
      try {
        next.value = coerce_value(next.kind, next.range, *it->value);
        next.status = ParamStatus::Confirmed;
      } catch (const ParamError&) {
      }
    }
  }
  *it = std::move(next);
}

void ParamSet::apply_update(const ParamUpdate& update, const geometry::ShapeRegistry& shapes) {
  auto it = std::find_if(specs_.begin(), specs_.end(), [&](const ParamSpec& s) { return s.name == update.name; });
  if (it == specs_.end()) throw ParamError(ParamErrc::UnknownParam, update.name + " is not declared");
  ParamSpec& spec = *it;

  if (spec.kind.is_reference()) {
    if (!update.ref || update.value) throw ParamError(ParamErrc::KindMismatch, update.name + " expects a shape reference");
    if (!shapes.contains(*update.ref)) {
      throw ParamError(ParamErrc::UnknownShapeId, "shape " + std::to_string(update.ref->value()) + " does not exist");
    }
    const auto kind = shapes.get(*update.ref).kind();
    const bool fits = spec.kind.tag == KindTag::ShapeRef ||
                      (spec.kind.tag == KindTag::PointRef && kind == geometry::ShapeKind::Point) ||
                      (spec.kind.tag == KindTag::CurveRef &&
                       (kind == geometry::ShapeKind::Polyline || kind == geometry::ShapeKind::Ellipse));
    if (!fits) {
      throw ParamError(ParamErrc::KindMismatch, update.name + " cannot reference a " + std::string(geometry::to_string(kind)));
    }
    spec.ref = update.ref;
  } else {
    if (!update.value || update.ref) throw ParamError(ParamErrc::KindMismatch, update.name + " expects a value");
    spec.value = coerce_value(spec.kind, spec.range, *update.value);
  }
  spec.status = ParamStatus::Confirmed;
}

Completeness ParamSet::validate_complete() const {
  Completeness c;
  for (const auto& s : specs_) {
    if (s.status != ParamStatus::Confirmed) c.missing.push_back(s.name);
  }
  return c;
}

const ParamSpec* ParamSet::find(std::string_view name) const {
  auto it = std::find_if(specs_.begin(), specs_.end(), [&](const ParamSpec& s) { return s.name == name; });
  return it == specs_.end() ? nullptr : &*it;
}

}  // namespace parlogue::params
