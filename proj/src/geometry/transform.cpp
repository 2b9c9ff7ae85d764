#include "parlogue/geometry/transform.hpp"

#include <cmath>

namespace parlogue::geometry {

Similarity Similarity::make(Vec3 translation, Vec3 axis, double angle, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw GeometryError(GeometryErrc::InvalidShape, "scale must be a positive finite number");
  }
  if (!is_finite(translation) || !is_finite(axis) || !std::isfinite(angle)) {
    throw GeometryError(GeometryErrc::InvalidShape, "transform has non-finite components");
  }
  Similarity t;
  t.scale = scale;
  t.translation = translation;
  if (angle != 0.0) {
    if (norm(axis) == 0.0) throw GeometryError(GeometryErrc::InvalidShape, "rotation axis is zero");
    t.rotation = Mat3::rotation(normalized(axis), angle);
  }
  return t;
}

Similarity compose(const Similarity& second, const Similarity& first) {
  Similarity t;
  t.scale = second.scale * first.scale;
  t.rotation = second.rotation * first.rotation;
  t.translation = second.rotation * (first.translation * second.scale) + second.translation;
  return t;
}

namespace {

struct Transformer {
  const Similarity& t;

  Shape operator()(const Point& p) const { return Point{t.apply(p.pos)}; }

  Shape operator()(const Polyline& pl) const {
    Polyline out{{}, pl.closed};
    out.vertices.reserve(pl.vertices.size());
    for (const auto& v : pl.vertices) out.vertices.push_back(t.apply(v));
    return out;
  }

  Shape operator()(const Ellipse& e) const {
    Ellipse out = e;
    out.center = t.apply(e.center);
    out.major_radius = e.major_radius * t.scale;
    out.minor_radius = e.minor_radius * t.scale;
    out.normal = t.rotation * e.normal;
    out.major_axis = t.rotation * e.major_axis;
    return out;
  }

  Shape operator()(const Extrusion& x) const {
    return Extrusion{transform(x.profile, t), x.height * t.scale};
  }

  Shape operator()(const Loft& l) const {
    Loft out;
    out.profiles.reserve(l.profiles.size());
    for (const auto& p : l.profiles) out.profiles.push_back(transform(p, t));
    return out;
  }

  Shape operator()(const Sweep& s) const { return Sweep{transform(s.profile, t), transform(s.path, t)}; }

  Shape operator()(const Group& g) const {
    Group out;
    out.children.reserve(g.children.size());
    for (const auto& c : g.children) out.children.push_back(transform(c, t));
    return out;
  }
};

}  // namespace

Shape transform(const Shape& shape, const Similarity& t) {
  if (t.is_identity()) return shape;
  return shape.visit(Transformer{t});
}

}  // namespace parlogue::geometry
