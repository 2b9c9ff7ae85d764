#include "parlogue/geometry/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace parlogue::geometry {

std::string_view to_string(GeometryErrc code) {
  switch (code) {
    case GeometryErrc::InvalidShape: return "InvalidShape";
    case GeometryErrc::NonPlanarProfile: return "NonPlanarProfile";
    case GeometryErrc::DegenerateShape: return "DegenerateShape";
    case GeometryErrc::ProfileMismatch: return "ProfileMismatch";
    case GeometryErrc::TooFewProfiles: return "TooFewProfiles";
    case GeometryErrc::DegeneratePath: return "DegeneratePath";
    case GeometryErrc::RegionDegenerate: return "RegionDegenerate";
    case GeometryErrc::UnknownShapeId: return "UnknownShapeId";
  }
  return "?";
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Point: return "point";
    case ShapeKind::Polyline: return "polyline";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Extrusion: return "extrusion";
    case ShapeKind::Loft: return "loft";
    case ShapeKind::Sweep: return "sweep";
    case ShapeKind::Group: return "group";
  }
  return "?";
}

ShapeKind Shape::kind() const { return static_cast<ShapeKind>(node_->value.index()); }

namespace {

[[noreturn]] void invalid(const std::string& what) { throw GeometryError(GeometryErrc::InvalidShape, what); }

void require_finite(const Vec3& v, const char* what) {
  if (!is_finite(v)) invalid(std::string(what) + " has a non-finite component");
}

void require_finite(double d, const char* what) {
  if (!std::isfinite(d)) invalid(std::string(what) + " is not finite");
}

std::size_t count_distinct(const std::vector<Vec3>& pts) {
  std::vector<Vec3> seen;
  for (const auto& p : pts) {
    if (std::find(seen.begin(), seen.end(), p) == seen.end()) seen.push_back(p);
  }
  return seen.size();
}

void validate_polyline(const Polyline& pl) {
  for (const auto& v : pl.vertices) require_finite(v, "polyline vertex");
  if (pl.vertices.size() < 2) invalid("polyline needs at least 2 vertices");
  if (pl.closed && count_distinct(pl.vertices) < 3) invalid("closed polyline needs at least 3 distinct vertices");
}

void validate_ellipse(const Ellipse& e) {
  require_finite(e.center, "ellipse center");
  require_finite(e.normal, "ellipse normal");
  require_finite(e.major_axis, "ellipse major axis");
  require_finite(e.major_radius, "ellipse major radius");
  require_finite(e.minor_radius, "ellipse minor radius");
  if (e.major_radius <= 0.0 || e.minor_radius <= 0.0) invalid("ellipse radii must be positive");
  if (std::abs(norm(e.normal) - 1.0) > 1e-9) invalid("ellipse normal must be unit length");
  if (std::abs(norm(e.major_axis) - 1.0) > 1e-9) invalid("ellipse major axis must be unit length");
  if (std::abs(dot(e.normal, e.major_axis)) > 1e-9) invalid("ellipse major axis must lie in its plane");
}

void require_profile(const Shape& profile, const char* owner) {
  if (!is_closed_curve(profile)) {
    invalid(std::string(owner) + " profile must be a closed polyline or an ellipse");
  }
}

}  // namespace

bool is_closed_curve(const Shape& shape) {
  if (shape.get_if<Ellipse>() != nullptr) return true;
  const auto* pl = shape.get_if<Polyline>();
  return pl != nullptr && pl->closed;
}

std::size_t group_depth(const Shape& shape) {
  const auto* g = shape.get_if<Group>();
  if (g == nullptr) return 0;
  std::size_t deepest = 0;
  for (const auto& c : g->children) deepest = std::max(deepest, group_depth(c));
  return deepest + 1;
}

void validate(const Shape& shape) {
  struct Visitor {
    void operator()(const Point& p) const { require_finite(p.pos, "point"); }
    void operator()(const Polyline& pl) const { validate_polyline(pl); }
    void operator()(const Ellipse& e) const { validate_ellipse(e); }
    void operator()(const Extrusion& x) const {
      require_profile(x.profile, "extrusion");
      validate(x.profile);
      require_finite(x.height, "extrusion height");
      if (x.height == 0.0) throw GeometryError(GeometryErrc::DegenerateShape, "extrusion height is zero");
    }
    void operator()(const Loft& l) const {
      if (l.profiles.size() < 2) throw GeometryError(GeometryErrc::TooFewProfiles, "loft needs at least 2 profiles");
      for (const auto& p : l.profiles) {
        if (!is_closed_curve(p)) throw GeometryError(GeometryErrc::ProfileMismatch, "loft profile is not closed");
        validate(p);
      }
    }
    void operator()(const Sweep& s) const {
      require_profile(s.profile, "sweep");
      validate(s.profile);
      const auto* path = s.path.get_if<Polyline>();
      if (path == nullptr) invalid("sweep path must be a polyline");
      validate(s.path);
    }
    void operator()(const Group& g) const {
      for (const auto& c : g.children) validate(c);
    }
  };
  shape.visit(Visitor{});
  if (group_depth(shape) > kMaxGroupDepth) invalid("group nesting exceeds 16 levels");
}

Shape make_point(Vec3 pos) {
  Shape s = Point{pos};
  validate(s);
  return s;
}

Shape make_polyline(std::vector<Vec3> vertices, bool closed) {
  if (closed && vertices.size() > 3 && vertices.front() == vertices.back()) vertices.pop_back();
  if (closed) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i] == vertices[(i + 1) % vertices.size()]) invalid("closed polyline has consecutive duplicate vertices");
    }
  }
  Shape s = Polyline{std::move(vertices), closed};
  validate(s);
  return s;
}

Shape make_ellipse(Vec3 center, double major_radius, double minor_radius, Vec3 normal,
                   std::optional<Vec3> major_axis) {
  require_finite(normal, "ellipse normal");
  if (norm(normal) == 0.0) invalid("ellipse normal is zero");
  normal = normalized(normal);
  Vec3 axis = major_axis ? *major_axis : any_perpendicular(normal);
  require_finite(axis, "ellipse major axis");
  axis = axis - normal * dot(axis, normal);
  if (norm(axis) < 1e-12) invalid("ellipse major axis is parallel to its normal");
  Shape s = Ellipse{center, major_radius, minor_radius, normal, normalized(axis)};
  validate(s);
  return s;
}

Shape make_extrusion(Shape profile, double height) {
  Shape s = Extrusion{std::move(profile), height};
  validate(s);
  fit_profile_plane(sample_profile(s.get<Extrusion>().profile, 16));
  return s;
}

Shape make_group(std::vector<Shape> children) {
  Shape s = Group{std::move(children)};
  validate(s);
  return s;
}

std::vector<Vec3> sample_profile(const Shape& profile, int resolution) {
  if (const auto* e = profile.get_if<Ellipse>()) {
    if (resolution < 3) invalid("curved shapes need a resolution of at least 3");
    const Vec3 v = cross(e->normal, e->major_axis);
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / resolution;
      pts.push_back(e->center + e->major_axis * (e->major_radius * std::cos(theta)) +
                    v * (e->minor_radius * std::sin(theta)));
    }
    return pts;
  }
  if (const auto* pl = profile.get_if<Polyline>(); pl != nullptr && pl->closed) {
    return pl->vertices;
  }
  throw GeometryError(GeometryErrc::ProfileMismatch, "profile is not a closed curve");
}

namespace {

Vec3 newell(const std::vector<Vec3>& loop) {
  Vec3 n;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % loop.size()];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

double bbox_diagonal(const std::vector<Vec3>& pts) {
  Vec3 lo = pts.front();
  Vec3 hi = pts.front();
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return norm(hi - lo);
}

}  // namespace

double loop_area(const std::vector<Vec3>& loop) { return 0.5 * norm(newell(loop)); }

Plane fit_profile_plane(const std::vector<Vec3>& loop) {
  if (loop.size() < 3) throw GeometryError(GeometryErrc::DegenerateShape, "profile has fewer than 3 points");
  const double diag = bbox_diagonal(loop);
  const Vec3 n = newell(loop);
  if (diag == 0.0 || norm(n) <= 1e-12 * diag * diag) {
    throw GeometryError(GeometryErrc::DegenerateShape, "profile encloses zero area");
  }
  Plane plane;
  plane.normal = normalized(n);
  for (const auto& p : loop) plane.origin += p;
  plane.origin *= 1.0 / static_cast<double>(loop.size());
  const double tol = 1e-6 * diag;
  for (const auto& p : loop) {
    if (std::abs(dot(p - plane.origin, plane.normal)) >= tol) {
      throw GeometryError(GeometryErrc::NonPlanarProfile, "profile points do not lie in one plane");
    }
  }
  plane.u = any_perpendicular(plane.normal);
  plane.v = cross(plane.normal, plane.u);
  return plane;
}

std::vector<Vec3> resample_closed(const std::vector<Vec3>& loop, std::size_t count) {
  const std::size_t n = loop.size();
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cumulative[i + 1] = cumulative[i] + norm(loop[(i + 1) % n] - loop[i]);
  }
  const double perimeter = cumulative[n];
  std::vector<Vec3> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double s = perimeter * static_cast<double>(j) / static_cast<double>(count);
    while (seg + 1 < n && cumulative[seg + 1] <= s) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
    const Vec3& a = loop[seg];
    const Vec3& b = loop[(seg + 1) % n];
    out.push_back(t == 0.0 ? a : a + (b - a) * t);
  }
  return out;
}

}  // namespace parlogue::geometry
