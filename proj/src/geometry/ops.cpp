#include "parlogue/geometry/ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace parlogue::geometry {

namespace {

// Resolution used only to test planarity of ellipse profiles at construction.
constexpr int kProbeResolution = 16;

void require_planar_profile(const Shape& profile) {
  if (!is_closed_curve(profile)) throw GeometryError(GeometryErrc::ProfileMismatch, "profile is not a closed curve");
  validate(profile);
  fit_profile_plane(sample_profile(profile, kProbeResolution));
}

}  // namespace

Shape loft(std::vector<Shape> profiles) {
  if (profiles.size() < 2) throw GeometryError(GeometryErrc::TooFewProfiles, "loft needs at least 2 profiles");
  for (const auto& p : profiles) require_planar_profile(p);
  return Loft{std::move(profiles)};
}

std::vector<std::vector<Vec3>> loft_rings(const Loft& loft, int resolution) {
  std::vector<std::vector<Vec3>> rings;
  rings.reserve(loft.profiles.size());
  std::size_t target = 0;
  for (const auto& p : loft.profiles) {
    rings.push_back(sample_profile(p, resolution));
    target = std::max(target, rings.back().size());
  }
  const Vec3 reference = fit_profile_plane(rings.front()).normal;
  for (auto& ring : rings) {
    if (dot(fit_profile_plane(ring).normal, reference) < 0.0) std::reverse(ring.begin() + 1, ring.end());
    if (ring.size() != target) ring = resample_closed(ring, target);
  }
  return rings;
}

namespace {

std::vector<Vec3> path_vertices(const Shape& path) {
  const auto* pl = path.get_if<Polyline>();
  if (pl == nullptr) throw GeometryError(GeometryErrc::DegeneratePath, "sweep path must be a polyline");
  if (pl->vertices.size() < 2) throw GeometryError(GeometryErrc::DegeneratePath, "sweep path needs at least 2 vertices");
  for (std::size_t i = 0; i + 1 < pl->vertices.size(); ++i) {
    if (pl->vertices[i] == pl->vertices[i + 1]) {
      throw GeometryError(GeometryErrc::DegeneratePath, "sweep path repeats a vertex");
    }
  }
  return pl->vertices;
}

}  // namespace

std::vector<Mat3> sweep_rotations(const std::vector<Vec3>& path) {
  const std::size_t m = path.size();
  std::vector<Vec3> tangents(m);
  std::vector<Vec3> seg(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) seg[i] = normalized(path[i + 1] - path[i]);
  tangents.front() = seg.front();
  tangents.back() = seg.back();
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const Vec3 bisector = seg[k - 1] + seg[k];
    if (norm(bisector) < 1e-12) throw GeometryError(GeometryErrc::DegeneratePath, "sweep path folds back on itself");
    tangents[k] = normalized(bisector);
  }

  std::vector<Mat3> out;
  out.reserve(m);
  out.push_back(Mat3::identity());
  Vec3 r = any_perpendicular(tangents.front());
  const Mat3 start = Mat3::from_columns(tangents.front(), r, cross(tangents.front(), r)).transposed();
  for (std::size_t k = 1; k < m; ++k) {
    const Vec3 v1 = path[k] - path[k - 1];
    const double c1 = dot(v1, v1);
    const Vec3 r_l = r - v1 * (2.0 / c1 * dot(v1, r));
    const Vec3 t_l = tangents[k - 1] - v1 * (2.0 / c1 * dot(v1, tangents[k - 1]));
    const Vec3 v2 = tangents[k] - t_l;
    const double c2 = dot(v2, v2);
    r = c2 > 0.0 ? r_l - v2 * (2.0 / c2 * dot(v2, r_l)) : r_l;
    const Mat3 frame = Mat3::from_columns(tangents[k], r, cross(tangents[k], r));
    out.push_back(frame * start);
  }
  return out;
}

Shape sweep(Shape profile, Shape path) {
  const auto vertices = path_vertices(path);
  for (const auto& v : vertices) {
    if (!is_finite(v)) throw GeometryError(GeometryErrc::InvalidShape, "sweep path has non-finite vertices");
  }
  sweep_rotations(vertices);
  require_planar_profile(profile);
  return Sweep{std::move(profile), std::move(path)};
}

namespace {

struct Region2d {
  Plane plane;
  std::vector<std::pair<double, double>> polygon;  // empty for ellipses
  const Ellipse* ellipse = nullptr;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;

  bool contains(double x, double y) const {
    if (ellipse != nullptr) {
      const double a = x / ellipse->major_radius;
      const double b = y / ellipse->minor_radius;
      return a * a + b * b < 1.0;
    }
    // Winding number.
    int winding = 0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto [x0, y0] = polygon[i];
      const auto [x1, y1] = polygon[(i + 1) % n];
      const double side = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0);
      if (y0 <= y) {
        if (y1 > y && side > 0) ++winding;
      } else if (y1 <= y && side < 0) {
        --winding;
      }
    }
    return winding != 0;
  }
};

Region2d project_region(const Shape& region) {
  if (!is_closed_curve(region)) throw GeometryError(GeometryErrc::ProfileMismatch, "region must be a closed curve");
  validate(region);
  Region2d r;
  if (const auto* e = region.get_if<Ellipse>()) {
    r.ellipse = e;
    r.plane = Plane{e->center, e->normal, e->major_axis, cross(e->normal, e->major_axis)};
    r.min_x = -e->major_radius;
    r.max_x = e->major_radius;
    r.min_y = -e->minor_radius;
    r.max_y = e->minor_radius;
    return r;
  }
  const auto& loop = region.get<Polyline>().vertices;
  try {
    r.plane = fit_profile_plane(loop);
  } catch (const GeometryError& err) {
    if (err.code() == GeometryErrc::DegenerateShape) {
      throw GeometryError(GeometryErrc::RegionDegenerate, "region encloses zero area");
    }
    throw;
  }
  r.min_x = r.min_y = INFINITY;
  r.max_x = r.max_y = -INFINITY;
  for (const auto& p : loop) {
    const Vec3 d = p - r.plane.origin;
    const double x = dot(d, r.plane.u);
    const double y = dot(d, r.plane.v);
    r.polygon.emplace_back(x, y);
    r.min_x = std::min(r.min_x, x);
    r.max_x = std::max(r.max_x, x);
    r.min_y = std::min(r.min_y, y);
    r.max_y = std::max(r.max_y, y);
  }
  return r;
}

double unit_interval(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace

Shape distribute_random(const Shape& region, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw GeometryError(GeometryErrc::InvalidShape, "count must be at least 1");
  const Region2d r = project_region(region);

  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 engine(seq);

  // A region filling less than 1e-6 of its box would take ~1e6 draws per hit.
  const std::size_t max_attempts = count * 1'000'000;
  Group out;
  out.children.reserve(count);
  std::size_t attempts = 0;
  while (out.children.size() < count) {
    if (++attempts > max_attempts) throw GeometryError(GeometryErrc::RegionDegenerate, "region too thin to sample");
    const double x = r.min_x + (r.max_x - r.min_x) * unit_interval(engine);
    const double y = r.min_y + (r.max_y - r.min_y) * unit_interval(engine);
    if (!r.contains(x, y)) continue;
    out.children.emplace_back(Point{r.plane.origin + r.plane.u * x + r.plane.v * y});
  }
  return out;
}

}  // namespace parlogue::geometry
