#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "parlogue/geometry/shape.hpp"

namespace parlogue::geometry {

/// Opaque shape handle. Ids are handed out in increasing order and never
/// reused within a registry.
class ShapeId {
 public:
  constexpr ShapeId() = default;
  constexpr explicit ShapeId(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  friend constexpr auto operator<=>(const ShapeId&, const ShapeId&) = default;

 private:
  std::uint64_t value_ = 0;
};

/// Single-writer store of shapes. `get` and `list` return copies.
class ShapeRegistry {
 public:
  ShapeId add(Shape shape);
  /// Errors: UnknownShapeId.
  void replace(ShapeId id, Shape shape);
  /// Errors: UnknownShapeId.
  void remove(ShapeId id);
  /// Errors: UnknownShapeId.
  Shape get(ShapeId id) const;

  bool contains(ShapeId id) const { return shapes_.contains(id); }
  std::size_t size() const { return shapes_.size(); }

  /// Live entries in insertion order.
  std::vector<std::pair<ShapeId, Shape>> list() const;

 private:
  std::uint64_t next_id_ = 1;
  std::map<ShapeId, Shape> shapes_;  // ids increase with insertion, so key order is insertion order
};

}  // namespace parlogue::geometry
