#pragma once

#include "parlogue/geometry/shape.hpp"
#include "parlogue/geometry/vec3.hpp"

namespace parlogue::geometry {

/// Uniform scale, then rotation, then translation, all about the origin.
struct Similarity {
  double scale = 1.0;
  Mat3 rotation = Mat3::identity();
  Vec3 translation;

  /// `axis` need not be unit; a zero angle yields an exact identity rotation.
  static Similarity make(Vec3 translation, Vec3 axis, double angle, double scale);

  bool is_identity() const { return scale == 1.0 && rotation.is_identity() && translation == Vec3{}; }

  Vec3 apply(const Vec3& p) const { return rotation * (p * scale) + translation; }
};

/// The similarity equal to applying `first` and then `second`.
Similarity compose(const Similarity& second, const Similarity& first);

/// Structure-preserving: the output has the same variant as the input.
Shape transform(const Shape& shape, const Similarity& t);

inline Shape transform(const Shape& shape, Vec3 translation, Vec3 axis, double angle, double scale) {
  return transform(shape, Similarity::make(translation, axis, angle, scale));
}

}  // namespace parlogue::geometry
