#pragma once

#include <cstdint>
#include <vector>

#include "parlogue/geometry/shape.hpp"

namespace parlogue::geometry {

/// Loft through at least two planar closed profiles.
/// Errors: TooFewProfiles, ProfileMismatch (non-closed profile), NonPlanarProfile.
Shape loft(std::vector<Shape> profiles);

/// Sampled rings of a loft, each resampled by arc length to the largest
/// sample count among the profiles. Rings whose winding opposes the first
/// profile are reversed (keeping their first point).
std::vector<std::vector<Vec3>> loft_rings(const Loft& loft, int resolution);

/// Sweep a planar closed profile along a polyline path.
/// Errors: DegeneratePath (fewer than 2 vertices, repeated consecutive
/// vertices, or a path that folds back on itself).
Shape sweep(Shape profile, Shape path);

/// Rotation-minimizing frames along a polyline by double reflection. Entry k
/// maps directions at the path start to directions at vertex k; entry 0 is
/// the identity.
std::vector<Mat3> sweep_rotations(const std::vector<Vec3>& path);

/// `count` points inside a planar closed region, drawn by rejection sampling
/// in the region's bounding box. Fully determined by (region, count, seed).
/// Errors: RegionDegenerate (zero area), ProfileMismatch (open region).
Shape distribute_random(const Shape& region, std::size_t count, std::uint64_t seed);

}  // namespace parlogue::geometry
