#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "parlogue/geometry/error.hpp"
#include "parlogue/geometry/vec3.hpp"

namespace parlogue::geometry {

inline constexpr std::size_t kMaxGroupDepth = 16;

struct ShapeNode;

enum class ShapeKind { Point, Polyline, Ellipse, Extrusion, Loft, Sweep, Group };

std::string_view to_string(ShapeKind kind);

/// Immutable shape value. Copies share the underlying node.
class Shape {
 public:
  template <class Alt>
    requires(!std::is_same_v<std::remove_cvref_t<Alt>, Shape>)
  Shape(Alt alt);  // NOLINT(google-explicit-constructor)

  ShapeKind kind() const;

  template <class Alt>
  const Alt* get_if() const;

  template <class Alt>
  const Alt& get() const;

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const;

  friend bool operator==(const Shape& a, const Shape& b);

 private:
  std::shared_ptr<const ShapeNode> node_;
};

struct Point {
  Vec3 pos;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Polyline {
  std::vector<Vec3> vertices;
  bool closed = false;
  friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// `major_axis` is the in-plane direction of the major radius, unit and
/// perpendicular to `normal`.
struct Ellipse {
  Vec3 center;
  double major_radius = 1.0;
  double minor_radius = 1.0;
  Vec3 normal{0.0, 0.0, 1.0};
  Vec3 major_axis{1.0, 0.0, 0.0};
  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

struct Extrusion {
  Shape profile;
  double height;
  friend bool operator==(const Extrusion&, const Extrusion&) = default;
};

struct Loft {
  std::vector<Shape> profiles;
  friend bool operator==(const Loft&, const Loft&) = default;
};

struct Sweep {
  Shape profile;
  Shape path;
  friend bool operator==(const Sweep&, const Sweep&) = default;
};

struct Group {
  std::vector<Shape> children;
  friend bool operator==(const Group&, const Group&) = default;
};

struct ShapeNode {
  std::variant<Point, Polyline, Ellipse, Extrusion, Loft, Sweep, Group> value;
};

template <class Alt>
  requires(!std::is_same_v<std::remove_cvref_t<Alt>, Shape>)
Shape::Shape(Alt alt) : node_(std::make_shared<const ShapeNode>(ShapeNode{std::move(alt)})) {}

template <class Alt>
const Alt* Shape::get_if() const {
  return std::get_if<Alt>(&node_->value);
}

template <class Alt>
const Alt& Shape::get() const {
  return std::get<Alt>(node_->value);
}

template <class Visitor>
decltype(auto) Shape::visit(Visitor&& v) const {
  return std::visit(std::forward<Visitor>(v), node_->value);
}

inline bool operator==(const Shape& a, const Shape& b) {
  return a.node_ == b.node_ || a.node_->value == b.node_->value;
}

// Validating factories. Each throws GeometryError(InvalidShape) when the
// shape invariants do not hold.

Shape make_point(Vec3 pos);

/// A closed polyline whose last vertex repeats the first drops the repeat.
Shape make_polyline(std::vector<Vec3> vertices, bool closed);

/// Major axis defaults to a canonical in-plane direction derived from `normal`.
Shape make_ellipse(Vec3 center, double major_radius, double minor_radius, Vec3 normal = {0, 0, 1},
                   std::optional<Vec3> major_axis = std::nullopt);

/// Profile must be a planar closed curve; height non-zero.
Shape make_extrusion(Shape profile, double height);

Shape make_group(std::vector<Shape> children);

/// Checks the stored invariants of `shape` and all nested shapes.
void validate(const Shape& shape);

/// True for closed polylines and ellipses.
bool is_closed_curve(const Shape& shape);

std::size_t group_depth(const Shape& shape);

/// Points of a closed profile: ellipses at `resolution` uniform angular
/// steps, polylines at their own vertices.
std::vector<Vec3> sample_profile(const Shape& profile, int resolution);

/// Plane through a set of points: vertex centroid and unit Newell normal.
struct Plane {
  Vec3 origin;
  Vec3 normal;
  Vec3 u;  ///< in-plane unit axis
  Vec3 v;  ///< normal x u
};

/// Fits a plane to a closed loop of points. Throws DegenerateShape for zero
/// area and NonPlanarProfile when any point lies farther than
/// 1e-6 * bounding-box diagonal from the plane.
Plane fit_profile_plane(const std::vector<Vec3>& loop);

/// Signed area (w.r.t. Newell normal direction, so always >= 0) of a loop.
double loop_area(const std::vector<Vec3>& loop);

/// Arc-length resampling of a closed loop to `count` points, starting at the
/// first vertex.
std::vector<Vec3> resample_closed(const std::vector<Vec3>& loop, std::size_t count);

}  // namespace parlogue::geometry
