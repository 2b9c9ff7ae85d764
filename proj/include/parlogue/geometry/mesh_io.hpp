#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "parlogue/geometry/tessellate.hpp"

namespace parlogue::geometry {

/// `v x y z` lines, then `f i j k` lines with 1-based indices, LF endings.
std::string to_obj(const TriMesh& mesh);

/// Several meshes in one OBJ document, each in its own `g shape_<i>` group.
std::string to_obj(const std::vector<TriMesh>& meshes);

/// `{"vertices":[[x,y,z],...],"triangles":[[a,b,c],...]}`
nlohmann::json to_json(const TriMesh& mesh);
TriMesh mesh_from_json(const nlohmann::json& j);

/// SHA-256 of the canonical (compact, key-sorted) JSON array of meshes.
std::string mesh_digest(const std::vector<TriMesh>& meshes);

}  // namespace parlogue::geometry
