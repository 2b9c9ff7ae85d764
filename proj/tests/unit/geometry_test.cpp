#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "parlogue/geometry/mesh_io.hpp"
#include "parlogue/geometry/ops.hpp"
#include "parlogue/geometry/registry.hpp"
#include "parlogue/geometry/tessellate.hpp"
#include "parlogue/geometry/transform.hpp"

using namespace parlogue::geometry;

namespace {

Shape unit_square(double z = 0.0) {
  return make_polyline({{0, 0, z}, {1, 0, z}, {1, 1, z}, {0, 1, z}}, true);
}

/// Independent ray-casting point-in-polygon test on the xy projection.
bool ray_cast_contains(const std::vector<Vec3>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

std::size_t unique_edges(const TriMesh& mesh) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      auto a = t[k], b = t[(k + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return edges.size();
}

double tri_area(const TriMesh& m, const std::array<std::uint32_t, 3>& t) {
  return 0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]));
}

/// Random convex polygon in the xy plane: points on a jittered circle.
Shape random_convex_profile(std::mt19937& rng, int max_points = 12) {
  std::uniform_int_distribution<int> count(3, max_points);
  std::uniform_real_distribution<double> radius(0.5, 3.0);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  const int n = count(rng);
  const double r = radius(rng);
  const Vec3 c{offset(rng), offset(rng), offset(rng)};
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pts.push_back(c + Vec3{r * std::cos(a), r * std::sin(a), 0.0});
  }
  return make_polyline(pts, true);
}

Similarity random_similarity(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> s(0.25, 4.0);
  return Similarity::make({u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng) + 0.1}, u(rng), s(rng));
}

}  // namespace

TEST_CASE("tessellate extrusion of the unit square") {
  const Shape box = make_extrusion(unit_square(), 1.0);
  const TriMesh mesh = tessellate(box, 32);

  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.triangles.size() == 12);

  // Oracle: the six faces of the unit cube, each covered by exactly two
  // triangles of total area 1.
  std::set<std::tuple<double, double, double>> corners;
  for (const auto& v : mesh.vertices) corners.insert({v.x, v.y, v.z});
  CHECK(corners.size() == 8);
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) CHECK(corners.contains({double(x), double(y), double(z)}));

  struct Face {
    int axis;
    double value;
  };
  std::vector<Face> faces;
  for (int axis = 0; axis < 3; ++axis)
    for (double value : {0.0, 1.0}) faces.push_back({axis, value});
  for (const auto& face : faces) {
    int count = 0;
    double area = 0.0;
    for (const auto& t : mesh.triangles) {
      bool on_face = true;
      for (auto idx : t) {
        const auto& v = mesh.vertices[idx];
        const double c = face.axis == 0 ? v.x : face.axis == 1 ? v.y : v.z;
        on_face = on_face && c == face.value;
      }
      if (on_face) {
        ++count;
        area += tri_area(mesh, t);
      }
    }
    CHECK(count == 2);
    CHECK(area == doctest::Approx(1.0));
  }

  // Outward orientation: signed volume of the closed surface is +1.
  double volume = 0.0;
  for (const auto& t : mesh.triangles) {
    volume += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]])) / 6.0;
  }
  CHECK(volume == doctest::Approx(1.0));
}

TEST_CASE("tessellate point and curves") {
  const TriMesh p = tessellate(make_point({1, 2, 3}), 16);
  CHECK(p.vertices.size() == 1);
  CHECK(p.triangles.empty());

  const TriMesh e = tessellate(make_ellipse({0, 0, 0}, 2, 1), 24);
  CHECK(e.vertices.size() == 24);
  CHECK(e.triangles.empty());

  CHECK_THROWS_AS(tessellate(make_extrusion(make_ellipse({0, 0, 0}, 2, 1), 1.0), 2), GeometryError);
}

TEST_CASE("loft of two unit squares") {
  const Shape l = loft({unit_square(0.0), unit_square(1.0)});
  const TriMesh mesh = tessellate(l, 32);
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.triangles.size() == 8);

  // Brute-force face enumeration: four side quads, no caps.
  for (const auto& t : mesh.triangles) {
    bool on_side = false;
    for (int axis = 0; axis < 2 && !on_side; ++axis) {
      for (double value : {0.0, 1.0}) {
        bool all = true;
        for (auto idx : t) all = all && (axis == 0 ? mesh.vertices[idx].x : mesh.vertices[idx].y) == value;
        on_side = on_side || all;
      }
    }
    CHECK(on_side);
  }

  // Side quads are planar: scalar triple product of the four corners.
  const auto& v = mesh.vertices;
  for (std::uint32_t i = 0; i < 4; ++i) {
    const std::uint32_t j = (i + 1) % 4;
    const Vec3 a = v[i], b = v[j], c = v[4 + j], d = v[4 + i];
    CHECK(std::abs(dot(b - a, cross(c - a, d - a))) < 1e-9);
  }
}

TEST_CASE("loft preconditions and resampling") {
  CHECK_THROWS_WITH_AS(loft({unit_square()}), doctest::Contains("TooFewProfiles"), GeometryError);
  const Shape open = make_polyline({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, false);
  try {
    loft({unit_square(), open});
    FAIL("expected ProfileMismatch");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::ProfileMismatch);
  }

  const Shape eight = make_polyline(
      {{0, 0, 1}, {0.5, 0, 1}, {1, 0, 1}, {1, 0.5, 1}, {1, 1, 1}, {0.5, 1, 1}, {0, 1, 1}, {0, 0.5, 1}}, true);
  const Shape l = loft({unit_square(0.0), eight});
  const auto rings = loft_rings(l.get<Loft>(), 32);
  REQUIRE(rings.size() == 2);
  CHECK(rings[0].size() == 8);
  CHECK(rings[1].size() == 8);
  const std::vector<Vec3> expected{{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}, {1, 0.5, 0},
                                   {1, 1, 0}, {0.5, 1, 0}, {0, 1, 0}, {0, 0.5, 0}};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(norm(rings[0][i] - expected[i]) < 1e-12);
  }
  CHECK(tessellate(l, 32).triangles.size() == 16);
}

TEST_CASE("transform examples") {
  const Shape sq = unit_square();
  CHECK(transform(sq, {0, 0, 0}, {0, 0, 1}, 0.0, 1.0) == sq);

  const Shape moved = transform(sq, {2, 0, 0}, {0, 0, 1}, 0.0, 1.0);
  REQUIRE(moved.kind() == ShapeKind::Polyline);
  const auto& pts = moved.get<Polyline>().vertices;
  CHECK(pts.front() == Vec3{2, 0, 0});
  CHECK(pts[2] == Vec3{3, 1, 0});

  const Shape circle = make_ellipse({0, 0, 0}, 1, 1);
  const Shape big = transform(circle, {}, {0, 0, 1}, 0.0, 2.0);
  REQUIRE(big.kind() == ShapeKind::Ellipse);
  CHECK(big.get<Ellipse>().major_radius == 2.0);
  CHECK(big.get<Ellipse>().minor_radius == 2.0);
  Vec3 centroid;
  const auto samples = sample_profile(big, 64);
  for (const auto& p : samples) {
    CHECK(std::abs(norm(p) - 2.0) < 1e-12);  // analytic circle of radius 2
    centroid += p;
  }
  centroid *= 1.0 / 64.0;
  CHECK(norm(centroid) < 1e-12);

  CHECK_THROWS_AS(Similarity::make({}, {0, 0, 1}, 0.0, 0.0), GeometryError);
}

TEST_CASE("property: transform composition") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape profile = random_convex_profile(rng);
    const Shape shape = trial % 2 == 0 ? make_extrusion(profile, 1.5) : profile;
    const Similarity t1 = random_similarity(rng);
    const Similarity t2 = random_similarity(rng);
    const TriMesh stepwise = tessellate(transform(transform(shape, t1), t2), 16);
    const TriMesh direct = tessellate(transform(shape, compose(t2, t1)), 16);
    REQUIRE(stepwise.vertices.size() == direct.vertices.size());
    CHECK(stepwise.triangles == direct.triangles);
    for (std::size_t i = 0; i < direct.vertices.size(); ++i) {
      CHECK(norm(stepwise.vertices[i] - direct.vertices[i]) < 1e-9);
    }
  }
}

TEST_CASE("property: identity transform is an exact no-op") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape profile = random_convex_profile(rng);
    const Shape e = make_ellipse({1, 2, 3}, 2.5, 1.5, {0.3, 0.4, 0.5});
    const Shape g = make_group({profile, make_extrusion(profile, 2.0), e, loft({profile, transform(profile, {0, 0, 1}, {0, 0, 1}, 0.0, 1.0)})});
    CHECK(transform(g, {}, {1, 0, 0}, 0.0, 1.0) == g);
  }
}

TEST_CASE("sweep along a straight path equals extrusion") {
  const Shape path = make_polyline({{0, 0, 0}, {0, 0, 1}}, false);
  const TriMesh swept = tessellate(sweep(unit_square(), path), 32);
  const TriMesh extruded = tessellate(make_extrusion(unit_square(), 1.0), 32);
  REQUIRE(swept.vertices.size() == extruded.vertices.size());
  CHECK(swept.triangles == extruded.triangles);
  for (std::size_t i = 0; i < swept.vertices.size(); ++i) {
    CHECK(norm(swept.vertices[i] - extruded.vertices[i]) < 1e-9);
  }

  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Shape profile = random_convex_profile(rng);
    const double h = 0.5 + trial * 0.1;
    const auto& first = profile.get<Polyline>().vertices.front();
    const TriMesh a = tessellate(sweep(profile, make_polyline({first, first + Vec3{0, 0, h}}, false)), 16);
    const TriMesh b = tessellate(make_extrusion(profile, h), 16);
    REQUIRE(a.vertices.size() == b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) CHECK(norm(a.vertices[i] - b.vertices[i]) < 1e-9);
  }
}

TEST_CASE("sweep preconditions and face counts") {
  try {
    sweep(unit_square(), Shape(Polyline{{{0, 0, 0}}, false}));
    FAIL("expected DegeneratePath");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::DegeneratePath);
  }
  try {
    sweep(unit_square(), Shape(Polyline{{{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}, false}));
    FAIL("expected DegeneratePath");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::DegeneratePath);
  }

  const Shape l_path = make_polyline({{0, 0, 0}, {0, 0, 2}, {2, 0, 2}}, false);
  const TriMesh mesh = tessellate(sweep(unit_square(), l_path), 32);
  const std::size_t segments = 2, samples = 4;
  const std::size_t cap_triangles = 2 * (samples - 2);
  CHECK(mesh.vertices.size() == (segments + 1) * samples);
  CHECK((mesh.triangles.size() - cap_triangles) / 2 == segments * samples);

  // Rings stay congruent to the profile (rigid transport).
  for (std::size_t ring = 1; ring <= segments; ++ring) {
    for (std::size_t i = 0; i < samples; ++i) {
      const double d0 = norm(mesh.vertices[(i + 1) % samples] - mesh.vertices[i]);
      const double dk = norm(mesh.vertices[ring * samples + (i + 1) % samples] - mesh.vertices[ring * samples + i]);
      CHECK(dk == doctest::Approx(d0).epsilon(1e-12));
    }
  }
}

TEST_CASE("distribute_random") {
  const Shape sq = unit_square();
  const Shape a = distribute_random(sq, 10, 42);
  const Shape b = distribute_random(sq, 10, 42);
  CHECK(a == b);
  CHECK(a.get<Group>().children.size() == 10);
  CHECK_FALSE(distribute_random(sq, 10, 43) == a);

  const Shape many = distribute_random(sq, 1000, 7);
  Vec3 centroid;
  for (const auto& c : many.get<Group>().children) centroid += c.get<Point>().pos;
  centroid *= 1.0 / 1000.0;
  CHECK(norm(centroid - Vec3{0.5, 0.5, 0.0}) < 0.05);

  const Shape degenerate = Shape(Polyline{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, true});
  try {
    distribute_random(degenerate, 3, 1);
    FAIL("expected RegionDegenerate");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::RegionDegenerate);
  }
}

TEST_CASE("property: distribute_random points pass a ray-casting containment oracle") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    // Star-shaped (non-convex) polygons exercise the containment test.
    std::uniform_int_distribution<int> count(5, 14);
    const int n = count(rng);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * i / n;
      const double r = i % 2 == 0 ? 2.0 : 0.7;
      pts.push_back({r * std::cos(a), r * std::sin(a), 0.0});
    }
    const Shape region = make_polyline(pts, true);
    const Shape spread = distribute_random(region, 200, static_cast<std::uint64_t>(trial));
    for (const auto& c : spread.get<Group>().children) {
      const Vec3 p = c.get<Point>().pos;
      CHECK(p.z == 0.0);
      CHECK(ray_cast_contains(pts, p.x, p.y));
    }
  }

  const Shape e = make_ellipse({1, 1, 0}, 3, 1);
  const Shape inside_ellipse = distribute_random(e, 300, 5);
  for (const auto& c : inside_ellipse.get<Group>().children) {
    const Vec3 p = c.get<Point>().pos - Vec3{1, 1, 0};
    CHECK((p.x / 3) * (p.x / 3) + p.y * p.y < 1.0);
  }
}

TEST_CASE("property: tessellation determinism and Euler characteristic") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const Shape profile = random_convex_profile(rng);
    const Shape solid = make_extrusion(profile, 0.5 + trial);
    const TriMesh m1 = tessellate(solid, 24);
    const TriMesh m2 = tessellate(solid, 24);
    CHECK(m1.same_geometry(m2));
    CHECK(to_obj(m1) == to_obj(m2));

    const auto v = static_cast<long>(m1.vertices.size());
    const auto e = static_cast<long>(unique_edges(m1));
    const auto f = static_cast<long>(m1.triangles.size());
    CHECK(v - e + f == 2);
    for (const auto& t : m1.triangles) {
      for (auto idx : t) CHECK(idx < m1.vertices.size());
      CHECK(tri_area(m1, t) > kDegenerateArea);
    }
  }
  const TriMesh cyl = tessellate(make_extrusion(make_ellipse({0, 0, 0}, 2, 1), 3.0), 20);
  CHECK(static_cast<long>(cyl.vertices.size()) - static_cast<long>(unique_edges(cyl)) +
            static_cast<long>(cyl.triangles.size()) ==
        2);
}

TEST_CASE("non-planar and degenerate profiles") {
  const Shape warped = Shape(Polyline{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0.5}, {0, 1, 0}}, true});
  try {
    tessellate(Shape(Extrusion{warped, 1.0}), 8);
    FAIL("expected NonPlanarProfile");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::NonPlanarProfile);
  }
  const Shape flat = Shape(Polyline{{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}}, true});
  try {
    tessellate(Shape(Extrusion{flat, 1.0}), 8);
    FAIL("expected DegenerateShape");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::DegenerateShape);
  }
}

TEST_CASE("non-convex cap triangulation") {
  // L-shaped profile: ear clipping must keep every triangle inside.
  const std::vector<Vec3> l{{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}};
  const auto tris = triangulate_loop(l);
  CHECK(tris.size() == 4);
  double area = 0.0;
  for (const auto& t : tris) area += 0.5 * cross(l[t[1]] - l[t[0]], l[t[2]] - l[t[0]]).z;
  CHECK(area == doctest::Approx(3.0));
}

TEST_CASE("shape invariants") {
  CHECK_THROWS_AS(make_polyline({{0, 0, 0}}, false), GeometryError);
  CHECK_THROWS_AS(make_polyline({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}, true), GeometryError);
  CHECK_THROWS_AS(make_ellipse({0, 0, 0}, -1, 1), GeometryError);
  CHECK_THROWS_AS(make_point({NAN, 0, 0}), GeometryError);
  CHECK_THROWS_AS(make_extrusion(make_polyline({{0, 0, 0}, {1, 0, 0}}, false), 1), GeometryError);

  // A trailing repeat of the first vertex is folded away.
  const Shape sq = make_polyline({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}}, true);
  CHECK(sq.get<Polyline>().vertices.size() == 4);

  Shape nested = make_point({0, 0, 0});
  for (std::size_t i = 0; i < kMaxGroupDepth; ++i) nested = make_group({nested});
  CHECK_THROWS_AS(make_group({nested}), GeometryError);
}

TEST_CASE("shape registry") {
  ShapeRegistry reg;
  const Shape a = unit_square();
  const Shape b = make_point({1, 2, 3});
  const ShapeId ida = reg.add(a);
  const ShapeId idb = reg.add(b);
  CHECK(reg.get(ida) == a);
  const auto listed = reg.list();
  REQUIRE(listed.size() == 2);
  CHECK(listed[0].first == ida);
  CHECK(listed[1].first == idb);

  reg.replace(ida, b);
  CHECK(reg.get(ida) == b);
  CHECK(reg.list().front().first == ida);

  reg.remove(ida);
  try {
    reg.get(ida);
    FAIL("expected UnknownShapeId");
  } catch (const GeometryError& e) {
    CHECK(e.code() == GeometryErrc::UnknownShapeId);
  }
  CHECK_THROWS_AS(reg.remove(ida), GeometryError);
  const ShapeId idc = reg.add(a);
  CHECK(idc != ida);
  CHECK(idc > idb);
}

TEST_CASE("mesh export formats") {
  const TriMesh mesh = tessellate(make_extrusion(unit_square(), 1.0), 8);
  const std::string obj = to_obj(mesh);
  CHECK(obj.starts_with("v 0 0 0\nv 1 0 0\n"));
  CHECK(obj.find("\r") == std::string::npos);
  CHECK(obj.find("f 1 2 6\n") != std::string::npos);

  const auto j = to_json(mesh);
  CHECK(j.at("vertices").size() == 8);
  CHECK(j.at("triangles").size() == 12);
  CHECK(mesh_from_json(j).same_geometry(mesh));

  const std::string grouped = to_obj(std::vector<TriMesh>{mesh, mesh});
  CHECK(grouped.starts_with("g shape_0\n"));
  CHECK(grouped.find("g shape_1\n") != std::string::npos);
  CHECK(grouped.find("f 9 10 14\n") != std::string::npos);
  CHECK(mesh_digest({mesh}) == mesh_digest({tessellate(make_extrusion(unit_square(), 1.0), 8)}));
  CHECK(mesh_digest({mesh}) != mesh_digest({mesh, mesh}));
}
