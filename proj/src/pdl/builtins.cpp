#include "parlogue/pdl/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "parlogue/common/text.hpp"
#include "parlogue/geometry/ops.hpp"
#include "parlogue/geometry/transform.hpp"

namespace parlogue::pdl {

namespace geo = parlogue::geometry;

std::string_view to_string(SType t) {
  switch (t) {
    case SType::Number: return "number";
    case SType::Boolean: return "boolean";
    case SType::String: return "string";
    case SType::Point: return "point";
    case SType::Shape: return "shape";
    case SType::List: return "list";
    case SType::Any: return "any";
  }
  return "?";
}

bool assignable(SType from, SType to) {
  if (from == SType::Any || to == SType::Any || from == to) return true;
  return from == SType::Point && to == SType::Shape;
}

SType static_type(TypeName t) {
  switch (t) {
    case TypeName::Number:
    case TypeName::Integer: return SType::Number;
    case TypeName::Boolean: return SType::Boolean;
    case TypeName::String: return SType::String;
    case TypeName::Point: return SType::Point;
    case TypeName::Shape: return SType::Shape;
    case TypeName::List: return SType::List;
  }
  return SType::Any;
}

SType static_type(const params::ParamKind& kind) {
  using params::KindTag;
  switch (kind.tag) {
    case KindTag::Number:
    case KindTag::Integer: return SType::Number;
    case KindTag::Boolean: return SType::Boolean;
    case KindTag::Choice: return SType::String;
    case KindTag::PointRef: return SType::Point;
    case KindTag::CurveRef:
    case KindTag::ShapeRef: return SType::Shape;
  }
  return SType::Any;
}

const std::vector<BuiltinSig>& all_builtins() {
  using enum SType;
  static const std::vector<BuiltinSig> table{
      {"point", {Number, Number, Number}, Point},
      {"polyline", {List}, Shape},
      {"closed_polyline", {List}, Shape},
      {"ellipse", {Point, Number, Number}, Shape},
      {"rect", {Point, Number, Number}, Shape},
      {"group", {List}, Shape},
      {"translate", {Shape, Number, Number, Number}, Shape, true},
      {"rotate", {Shape, Number}, Shape, true},
      {"scale", {Shape, Number}, Shape, true},
      {"extrude", {Shape, Number}, Shape},
      // loft also accepts two or more shapes; the checker special-cases it.
      {"loft", {List}, Shape},
      {"sweep", {Shape, Shape}, Shape},
      {"array_linear", {Shape, Number, Number, Number, Number}, List},
      {"array_radial", {Shape, Number, Point}, List},
      {"distribute_random", {Shape, Number, Number}, List},
      {"append", {List, Shape}, List},
      {"len", {List}, Number},
      {"sqrt", {Number}, Number},
      {"abs", {Number}, Number},
      {"floor", {Number}, Number},
      {"sin", {Number}, Number},
      {"cos", {Number}, Number},
      {"min", {Number, Number}, Number},
      {"max", {Number, Number}, Number},
      {"x", {Shape}, Number},
      {"y", {Shape}, Number},
      {"z", {Shape}, Number},
  };
  return table;
}

const BuiltinSig* find_builtin(std::string_view name) {
  const auto& table = all_builtins();
  auto it = std::find_if(table.begin(), table.end(), [&](const BuiltinSig& b) { return b.name == name; });
  return it == table.end() ? nullptr : &*it;
}

bool is_builtin(std::string_view name) { return find_builtin(name) != nullptr; }

bool is_reserved_name(std::string_view name) {
  static const std::vector<std::string_view> words{"param", "method", "logic", "let",  "for",   "in",
                                                   "if",    "else",   "emit",  "return", "true", "false",
                                                   "range", "choice"};
  if (std::find(words.begin(), words.end(), name) != words.end()) return true;
  if (type_name_from_string(name)) return true;
  if (params::kind_tag_from_string(name)) return true;
  return is_builtin(name);
}

SType dynamic_type(const Value& v) {
  switch (v.index()) {
    case 0: return SType::Number;
    case 1: return SType::Boolean;
    case 2: return SType::String;
    case 3: return std::get<geo::Shape>(v).kind() == geo::ShapeKind::Point ? SType::Point : SType::Shape;
    default: return SType::List;
  }
}

std::string describe(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
  if (const auto* sh = std::get_if<geo::Shape>(&v)) return std::string(geo::to_string(sh->kind()));
  return "list of " + std::to_string(std::get<List>(v).size());
}

std::uint64_t mix_seed(std::uint64_t eval_seed, std::uint64_t call_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(eval_seed), static_cast<std::uint32_t>(eval_seed >> 32),
                    static_cast<std::uint32_t>(call_seed), static_cast<std::uint32_t>(call_seed >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

namespace {

constexpr std::size_t kMaxGenerated = 10'000;

[[noreturn]] void domain(const std::string& what) { throw RuntimeFault(code::kRuntimeDomain, what); }

double num(const std::vector<Value>& args, std::size_t i) { return std::get<double>(args[i]); }
const geo::Shape& shape(const std::vector<Value>& args, std::size_t i) { return std::get<geo::Shape>(args[i]); }
const List& list(const std::vector<Value>& args, std::size_t i) { return std::get<List>(args[i]); }

geo::Vec3 point_of(const geo::Shape& s, std::string_view fn) {
  const auto* p = s.get_if<geo::Point>();
  if (p == nullptr) domain(std::string(fn) + " expects a point, got a " + std::string(geo::to_string(s.kind())));
  return p->pos;
}

std::size_t count_arg(double v, std::string_view fn, std::size_t min) {
  if (!std::isfinite(v) || std::trunc(v) != v || v < static_cast<double>(min)) {
    domain(std::string(fn) + " count must be a whole number >= " + std::to_string(min) + ", got " + format_double(v));
  }
  if (v > static_cast<double>(kMaxGenerated)) {
    throw RuntimeFault(code::kCapExceeded, std::string(fn) + " count " + format_double(v) + " exceeds the shape cap");
  }
  return static_cast<std::size_t>(v);
}

std::vector<geo::Vec3> points_of(const List& items, std::string_view fn) {
  std::vector<geo::Vec3> pts;
  pts.reserve(items.size());
  for (const auto& s : items) pts.push_back(point_of(s, fn));
  return pts;
}

geo::Shape rotate_z(const geo::Shape& s, double degrees, geo::Vec3 about) {
  const double rad = degrees * std::numbers::pi / 180.0;
  const auto to_origin = geo::Similarity::make(-about, {0, 0, 1}, 0.0, 1.0);
  const auto turn = geo::Similarity::make({}, {0, 0, 1}, rad, 1.0);
  const auto back = geo::Similarity::make(about, {0, 0, 1}, 0.0, 1.0);
  return geo::transform(s, geo::compose(back, geo::compose(turn, to_origin)));
}

Value run(std::string_view name, const std::vector<Value>& args, std::uint64_t eval_seed) {
  if (name == "point") return geo::make_point({num(args, 0), num(args, 1), num(args, 2)});
  if (name == "polyline") return geo::make_polyline(points_of(list(args, 0), name), false);
  if (name == "closed_polyline") return geo::make_polyline(points_of(list(args, 0), name), true);
  if (name == "ellipse") return geo::make_ellipse(point_of(shape(args, 0), name), num(args, 1), num(args, 2));
  if (name == "rect") {
    const auto c = point_of(shape(args, 0), name);
    const double w = num(args, 1);
    const double d = num(args, 2);
    if (!(w > 0.0) || !(d > 0.0)) domain("rect width and depth must be positive");
    return geo::make_polyline({c, c + geo::Vec3{w, 0, 0}, c + geo::Vec3{w, d, 0}, c + geo::Vec3{0, d, 0}}, true);
  }
  if (name == "group") return geo::make_group(list(args, 0));
  if (name == "translate") {
    return geo::transform(shape(args, 0), {num(args, 1), num(args, 2), num(args, 3)}, {0, 0, 1}, 0.0, 1.0);
  }
  if (name == "rotate") return rotate_z(shape(args, 0), num(args, 1), {});
  if (name == "scale") {
    if (!(num(args, 1) > 0.0)) domain("scale factor must be positive");
    return geo::transform(shape(args, 0), {}, {0, 0, 1}, 0.0, num(args, 1));
  }
  if (name == "extrude") return geo::make_extrusion(shape(args, 0), num(args, 1));
  if (name == "loft") {
    if (args.size() == 1) return geo::loft(list(args, 0));
    List profiles;
    for (std::size_t i = 0; i < args.size(); ++i) profiles.push_back(shape(args, i));
    return geo::loft(std::move(profiles));
  }
  if (name == "sweep") return geo::sweep(shape(args, 0), shape(args, 1));
  if (name == "array_linear") {
    const std::size_t n = count_arg(num(args, 1), name, 1);
    const geo::Vec3 step{num(args, 2), num(args, 3), num(args, 4)};
    List out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(geo::transform(shape(args, 0), step * static_cast<double>(i), {0, 0, 1}, 0.0, 1.0));
    }
    return out;
  }
  if (name == "array_radial") {
    const std::size_t n = count_arg(num(args, 1), name, 1);
    const auto center = point_of(shape(args, 2), name);
    List out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(rotate_z(shape(args, 0), 360.0 * static_cast<double>(i) / static_cast<double>(n), center));
    }
    return out;
  }
  if (name == "distribute_random") {
    const std::size_t n = count_arg(num(args, 1), name, 0);
    const double seed = num(args, 2);
    if (!std::isfinite(seed) || std::trunc(seed) != seed || seed < 0 || seed > 9.0e15) {
      domain("distribute_random seed must be a whole number >= 0");
    }
    const auto pts = geo::distribute_random(shape(args, 0), n, mix_seed(eval_seed, static_cast<std::uint64_t>(seed)));
    return pts.get<geo::Group>().children;
  }
  if (name == "append") {
    List out = list(args, 0);
    out.push_back(shape(args, 1));
    if (out.size() > kMaxGenerated) throw RuntimeFault(code::kCapExceeded, "list exceeds the shape cap");
    return out;
  }
  if (name == "len") return static_cast<double>(list(args, 0).size());
  if (name == "sqrt") {
    if (num(args, 0) < 0.0) domain("sqrt of a negative number");
    return std::sqrt(num(args, 0));
  }
  if (name == "abs") return std::abs(num(args, 0));
  if (name == "floor") return std::floor(num(args, 0));
  if (name == "sin") return std::sin(num(args, 0) * std::numbers::pi / 180.0);
  if (name == "cos") return std::cos(num(args, 0) * std::numbers::pi / 180.0);
  if (name == "min") return std::min(num(args, 0), num(args, 1));
  if (name == "max") return std::max(num(args, 0), num(args, 1));
  if (name == "x") return point_of(shape(args, 0), name).x;
  if (name == "y") return point_of(shape(args, 0), name).y;
  if (name == "z") return point_of(shape(args, 0), name).z;
  throw RuntimeFault(code::kUnregisteredMethod, "unknown builtin '" + std::string(name) + "'");
}

}  // namespace

Value call_builtin(std::string_view name, const std::vector<Value>& args, std::uint64_t eval_seed) {
  const BuiltinSig* sig = find_builtin(name);
  if (sig == nullptr) throw RuntimeFault(code::kUnregisteredMethod, "unknown builtin '" + std::string(name) + "'");
  const bool loft_shapes = name == "loft" && !(args.size() == 1 && std::holds_alternative<List>(args[0]));
  if (loft_shapes) {
    if (args.size() < 2) throw RuntimeFault(code::kArity, "loft takes a list or at least 2 profiles");
    for (const auto& a : args) {
      if (!assignable(dynamic_type(a), SType::Shape)) throw RuntimeFault(code::kType, "loft profile must be a shape");
    }
  } else {
    if (args.size() != sig->params.size()) {
      throw RuntimeFault(code::kArity, std::string(name) + " takes " + std::to_string(sig->params.size()) +
                                           " arguments, got " + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!assignable(dynamic_type(args[i]), sig->params[i])) {
        throw RuntimeFault(code::kType, std::string(name) + " argument " + std::to_string(i + 1) + " must be " +
                                            std::string(to_string(sig->params[i])) + ", got " + describe(args[i]));
      }
    }
  }
  Value out;
  try {
    out = run(name, args, eval_seed);
  } catch (const geo::GeometryError& e) {
    domain(std::string(name) + ": " + e.what());
  }
  if (const auto* d = std::get_if<double>(&out); d != nullptr && !std::isfinite(*d)) {
    domain(std::string(name) + " produced a non-finite number");
  }
  return out;
}

}  // namespace parlogue::pdl
