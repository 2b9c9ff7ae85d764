#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parlogue::geometry {

enum class GeometryErrc {
  InvalidShape,
  NonPlanarProfile,
  DegenerateShape,
  ProfileMismatch,
  TooFewProfiles,
  DegeneratePath,
  RegionDegenerate,
  UnknownShapeId,
};

std::string_view to_string(GeometryErrc code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(GeometryErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  GeometryErrc code() const noexcept { return code_; }

 private:
  GeometryErrc code_;
};

}  // namespace parlogue::geometry
