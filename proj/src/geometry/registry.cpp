#include "parlogue/geometry/registry.hpp"

#include <string>

namespace parlogue::geometry {

namespace {

[[noreturn]] void unknown(ShapeId id) {
  throw GeometryError(GeometryErrc::UnknownShapeId, "no shape with id " + std::to_string(id.value()));
}

}  // namespace

ShapeId ShapeRegistry::add(Shape shape) {
  const ShapeId id{next_id_++};
  shapes_.emplace(id, std::move(shape));
  return id;
}

void ShapeRegistry::replace(ShapeId id, Shape shape) {
  auto it = shapes_.find(id);
  if (it == shapes_.end()) unknown(id);
  it->second = std::move(shape);
}

void ShapeRegistry::remove(ShapeId id) {
  if (shapes_.erase(id) == 0) unknown(id);
}

Shape ShapeRegistry::get(ShapeId id) const {
  auto it = shapes_.find(id);
  if (it == shapes_.end()) unknown(id);
  return it->second;
}

std::vector<std::pair<ShapeId, Shape>> ShapeRegistry::list() const {
  return {shapes_.begin(), shapes_.end()};
}

}  // namespace parlogue::geometry
