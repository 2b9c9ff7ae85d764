#include "parlogue/geometry/mesh_io.hpp"

#include "parlogue/common/hash.hpp"
#include "parlogue/common/text.hpp"

namespace parlogue::geometry {

namespace {

void write_vertices(std::string& out, const TriMesh& mesh) {
  for (const auto& v : mesh.vertices) {
    out += "v " + format_double(v.x) + ' ' + format_double(v.y) + ' ' + format_double(v.z) + '\n';
  }
}

void write_faces(std::string& out, const TriMesh& mesh, std::size_t base) {
  for (const auto& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + base + 1) + ' ' + std::to_string(t[1] + base + 1) + ' ' +
           std::to_string(t[2] + base + 1) + '\n';
  }
}

}  // namespace

std::string to_obj(const TriMesh& mesh) {
  std::string out;
  write_vertices(out, mesh);
  write_faces(out, mesh, 0);
  return out;
}

std::string to_obj(const std::vector<TriMesh>& meshes) {
  std::string out;
  std::size_t base = 0;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    out += "g shape_" + std::to_string(i) + '\n';
    write_vertices(out, meshes[i]);
    write_faces(out, meshes[i], base);
    base += meshes[i].vertices.size();
  }
  return out;
}

nlohmann::json to_json(const TriMesh& mesh) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : mesh.vertices) vertices.push_back({v.x, v.y, v.z});
  nlohmann::json triangles = nlohmann::json::array();
  for (const auto& t : mesh.triangles) triangles.push_back({t[0], t[1], t[2]});
  return {{"vertices", std::move(vertices)}, {"triangles", std::move(triangles)}};
}

TriMesh mesh_from_json(const nlohmann::json& j) {
  TriMesh mesh;
  for (const auto& v : j.at("vertices")) {
    mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
  }
  for (const auto& t : j.at("triangles")) {
    mesh.triangles.push_back({t.at(0).get<std::uint32_t>(), t.at(1).get<std::uint32_t>(), t.at(2).get<std::uint32_t>()});
  }
  return mesh;
}

std::string mesh_digest(const std::vector<TriMesh>& meshes) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& m : meshes) all.push_back(to_json(m));
  return sha256_hex(all.dump());
}

}  // namespace parlogue::geometry
