#pragma once

#include "vem/mesh.hpp"

#include <filesystem>
#include <string>
#include <variant>

namespace vem {

using AnyMesh = std::variant<PolygonalMesh2, PolyhedralMesh3>;

/// {"dim":2, "vertices":[[x,y],...], "cells":[[v0,v1,...],...]}
/// {"dim":3, "vertices":[[x,y,z],...], "faces":[[v...],...], "cells":[[[f,+1|-1],...],...]}
std::string mesh_to_json(const PolygonalMesh2& mesh);
std::string mesh_to_json(const PolyhedralMesh3& mesh);

/// Parses and validates; throws InvalidMesh on malformed input.
AnyMesh mesh_from_json(const std::string& text);

void write_mesh(const std::filesystem::path& path, const AnyMesh& mesh);
AnyMesh read_mesh(const std::filesystem::path& path);

}  // namespace vem
