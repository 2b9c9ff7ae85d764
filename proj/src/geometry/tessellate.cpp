#include "parlogue/geometry/tessellate.hpp"

#include <cmath>

#include "parlogue/geometry/ops.hpp"

namespace parlogue::geometry {

void TriMesh::append(const TriMesh& other) {
  const auto offset = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
}

namespace {

using Tri = std::array<std::uint32_t, 3>;

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * norm(cross(b - a, c - a)); }

void push_triangle(TriMesh& mesh, Tri t) {
  if (triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > kDegenerateArea) {
    mesh.triangles.push_back(t);
  }
}

/// Rings are laid out back to back in `mesh.vertices`, each `n` long.
void add_walls(TriMesh& mesh, std::size_t ring_count, std::size_t n, bool flip) {
  for (std::size_t r = 0; r + 1 < ring_count; ++r) {
    const auto lo = static_cast<std::uint32_t>(r * n);
    const auto hi = static_cast<std::uint32_t>((r + 1) * n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t j = (i + 1) % static_cast<std::uint32_t>(n);
      const std::uint32_t a = lo + i, b = lo + j, c = hi + j, d = hi + i;
      if (flip) {
        push_triangle(mesh, {a, c, b});
        push_triangle(mesh, {a, d, c});
      } else {
        push_triangle(mesh, {a, b, c});
        push_triangle(mesh, {a, c, d});
      }
    }
  }
}

void add_cap(TriMesh& mesh, const std::vector<Vec3>& ring, std::uint32_t offset, bool reverse) {
  for (auto t : triangulate_loop(ring)) {
    if (reverse) std::swap(t[1], t[2]);
    push_triangle(mesh, {t[0] + offset, t[1] + offset, t[2] + offset});
  }
}

/// Walls between rings plus both caps, outward-facing when the rings advance
/// along the profile normal.
TriMesh capped_tube(const std::vector<std::vector<Vec3>>& rings, bool advances_along_normal) {
  TriMesh mesh;
  const std::size_t n = rings.front().size();
  for (const auto& ring : rings) mesh.vertices.insert(mesh.vertices.end(), ring.begin(), ring.end());
  add_walls(mesh, rings.size(), n, !advances_along_normal);
  add_cap(mesh, rings.front(), 0, advances_along_normal);
  add_cap(mesh, rings.back(), static_cast<std::uint32_t>((rings.size() - 1) * n), !advances_along_normal);
  return mesh;
}

TriMesh tessellate_extrusion(const Extrusion& x, int resolution) {
  const auto base = sample_profile(x.profile, resolution);
  const Plane plane = fit_profile_plane(base);
  const Vec3 offset = plane.normal * x.height;
  std::vector<Vec3> top;
  top.reserve(base.size());
  for (const auto& p : base) top.push_back(p + offset);
  return capped_tube({base, top}, x.height > 0.0);
}

TriMesh tessellate_sweep(const Sweep& s, int resolution) {
  const auto base = sample_profile(s.profile, resolution);
  const Plane plane = fit_profile_plane(base);
  const auto* path = s.path.get_if<Polyline>();
  if (path == nullptr || path->vertices.size() < 2) {
    throw GeometryError(GeometryErrc::DegenerateShape, "sweep path is not a polyline of 2+ vertices");
  }
  const auto& pts = path->vertices;
  const auto rotations = sweep_rotations(pts);
  std::vector<std::vector<Vec3>> rings;
  rings.reserve(pts.size());
  rings.push_back(base);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    std::vector<Vec3> ring;
    ring.reserve(base.size());
    for (const auto& p : base) ring.push_back(pts[k] + rotations[k] * (p - pts.front()));
    rings.push_back(std::move(ring));
  }
  return capped_tube(rings, dot(plane.normal, pts[1] - pts[0]) >= 0.0);
}

TriMesh tessellate_loft(const Loft& l, int resolution) {
  if (l.profiles.size() < 2) throw GeometryError(GeometryErrc::DegenerateShape, "loft needs at least 2 profiles");
  const auto rings = loft_rings(l, resolution);
  const Plane first = fit_profile_plane(rings.front());
  const Plane last = fit_profile_plane(rings.back());
  TriMesh mesh;
  for (const auto& ring : rings) mesh.vertices.insert(mesh.vertices.end(), ring.begin(), ring.end());
  add_walls(mesh, rings.size(), rings.front().size(), dot(first.normal, last.origin - first.origin) < 0.0);
  return mesh;
}

std::vector<Vec3> curve_points(const Shape& shape, int resolution) {
  if (const auto* pl = shape.get_if<Polyline>()) return pl->vertices;
  return sample_profile(shape, resolution);
}

}  // namespace

TriMesh tessellate(const Shape& shape, int resolution) {
  struct Visitor {
    const Shape& shape;
    int resolution;
    TriMesh operator()(const Point& p) const { return TriMesh{{p.pos}, {}, 0}; }
    TriMesh operator()(const Polyline&) const { return TriMesh{curve_points(shape, resolution), {}, 0}; }
    TriMesh operator()(const Ellipse&) const { return TriMesh{curve_points(shape, resolution), {}, 0}; }
    TriMesh operator()(const Extrusion& x) const { return tessellate_extrusion(x, resolution); }
    TriMesh operator()(const Loft& l) const { return tessellate_loft(l, resolution); }
    TriMesh operator()(const Sweep& s) const { return tessellate_sweep(s, resolution); }
    TriMesh operator()(const Group& g) const {
      TriMesh mesh;
      for (const auto& c : g.children) mesh.append(tessellate(c, resolution));
      return mesh;
    }
  };
  return shape.visit(Visitor{shape, resolution});
}

std::vector<Tri> triangulate_loop(const std::vector<Vec3>& loop) {
  const Plane plane = fit_profile_plane(loop);
  std::vector<std::pair<double, double>> p;
  p.reserve(loop.size());
  for (const auto& v : loop) {
    const Vec3 d = v - plane.origin;
    p.emplace_back(dot(d, plane.u), dot(d, plane.v));
  }
  auto cross2 = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return (p[b].first - p[a].first) * (p[c].second - p[a].second) -
           (p[b].second - p[a].second) * (p[c].first - p[a].first);
  };
  // Orientation in the (u, v) frame is counter-clockwise because the frame
  // follows the Newell normal.
  auto inside = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t q) {
    return cross2(a, b, q) >= 0.0 && cross2(b, c, q) >= 0.0 && cross2(c, a, q) >= 0.0;
  };

  double scale = 0.0;
  for (const auto& [x, y] : p) scale = std::max(scale, std::max(std::abs(x), std::abs(y)));
  const double eps = 1e-12 * std::max(scale * scale, 1e-300);

  std::vector<std::uint32_t> remaining(loop.size());
  for (std::uint32_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  std::vector<Tri> out;
  std::size_t i = 0;
  std::size_t stalled = 0;
  while (remaining.size() > 3) {
    const std::size_t n = remaining.size();
    const std::uint32_t prev = remaining[(i + n - 1) % n];
    const std::uint32_t cur = remaining[i % n];
    const std::uint32_t next = remaining[(i + 1) % n];
    const double turn = cross2(prev, cur, next);
    if (std::abs(turn) <= eps) {
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i % n));
      stalled = 0;
      continue;
    }
    bool ear = turn > 0.0;
    for (std::size_t k = 0; ear && k < n; ++k) {
      const std::uint32_t q = remaining[k];
      if (q == prev || q == cur || q == next) continue;
      if (p[q] == p[prev] || p[q] == p[cur] || p[q] == p[next]) continue;
      if (inside(prev, cur, next, q)) ear = false;
    }
    if (ear) {
      out.push_back({prev, cur, next});
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i % n));
      stalled = 0;
      continue;
    }
    i = (i + 1) % n;
    if (++stalled > n) throw GeometryError(GeometryErrc::DegenerateShape, "profile is not a simple polygon");
  }
  if (remaining.size() == 3 && std::abs(cross2(remaining[0], remaining[1], remaining[2])) > eps) {
    out.push_back({remaining[0], remaining[1], remaining[2]});
  }
  return out;
}

}  // namespace parlogue::geometry
