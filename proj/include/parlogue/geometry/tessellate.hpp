#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "parlogue/geometry/shape.hpp"

namespace parlogue::geometry {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  /// Stamped by the owner of the mesh (artifact generation); tessellation
  /// always produces 0.
  std::uint64_t generation = 0;

  /// Geometry equality; ignores `generation`.
  bool same_geometry(const TriMesh& other) const {
    return vertices == other.vertices && triangles == other.triangles;
  }

  void append(const TriMesh& other);
};

inline constexpr double kDegenerateArea = 1e-12;

/// Deterministic triangulation.
///
/// - Points and polylines produce their vertices and no triangles.
/// - Side walls are quads (lower ring i, i+1; upper ring i+1, i) split
///   along the diagonal from the lower-left corner.
/// - Caps of extrusions and sweeps are ear-clipped from the profile's own
///   vertices; lofts are uncapped.
/// - Groups concatenate their children.
///
/// Errors: NonPlanarProfile, DegenerateShape.
TriMesh tessellate(const Shape& shape, int resolution);

/// Ear-clipping of a planar simple loop. Indices refer to `loop`; triangles
/// follow the loop's winding. Collinear vertices are dropped silently.
std::vector<std::array<std::uint32_t, 3>> triangulate_loop(const std::vector<Vec3>& loop);

}  // namespace parlogue::geometry
