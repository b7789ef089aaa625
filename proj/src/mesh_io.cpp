#include "vem/mesh_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vem {

using nlohmann::json;

std::string mesh_to_json(const PolygonalMesh2& mesh) {
  json j;
  j["dim"] = 2;
  j["vertices"] = json::array();
  for (const auto& v : mesh.vertices()) j["vertices"].push_back({v.x(), v.y()});
  j["cells"] = mesh.cells();
  return j.dump();
}

std::string mesh_to_json(const PolyhedralMesh3& mesh) {
  json j;
  j["dim"] = 3;
  j["vertices"] = json::array();
  for (const auto& v : mesh.vertices()) j["vertices"].push_back({v.x(), v.y(), v.z()});
  j["faces"] = mesh.faces();
  j["cells"] = json::array();
  for (const auto& cell : mesh.cells()) {
    json c = json::array();
    for (const FaceRef& fr : cell) c.push_back({fr.face, fr.sign});
    j["cells"].push_back(std::move(c));
  }
  return j.dump();
}

AnyMesh mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidMesh(std::string("mesh file is not valid JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    if (dim == 2) {
      std::vector<Vec2> verts;
      for (const auto& v : j.at("vertices")) {
        if (v.size() != 2) throw InvalidMesh("2D vertex must have 2 coordinates");
        verts.emplace_back(v[0].get<double>(), v[1].get<double>());
      }
      auto cells = j.at("cells").get<std::vector<std::vector<int>>>();
      return PolygonalMesh2(std::move(verts), std::move(cells));
    }
    if (dim == 3) {
      std::vector<Vec3> verts;
      for (const auto& v : j.at("vertices")) {
        if (v.size() != 3) throw InvalidMesh("3D vertex must have 3 coordinates");
        verts.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
      }
      auto faces = j.at("faces").get<std::vector<std::vector<int>>>();
      std::vector<std::vector<FaceRef>> cells;
      for (const auto& c : j.at("cells")) {
        std::vector<FaceRef> refs;
        for (const auto& fr : c) {
          if (fr.size() != 2) throw InvalidMesh("3D cell entries must be [face, sign]");
          refs.push_back({fr[0].get<int>(), fr[1].get<int>()});
        }
        cells.push_back(std::move(refs));
      }
      return PolyhedralMesh3(std::move(verts), std::move(faces), std::move(cells));
    }
    throw InvalidMesh("mesh dim must be 2 or 3");
  } catch (const json::exception& e) {
    throw InvalidMesh(std::string("malformed mesh file: ") + e.what());
  }
}

void write_mesh(const std::filesystem::path& path, const AnyMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << std::visit([](const auto& m) { return mesh_to_json(m); }, mesh) << '\n';
}

AnyMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return mesh_from_json(ss.str());
}

}  // namespace vem
