#pragma once

#include "vem/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vem {

struct MeshEdge {
  std::array<int, 2> vertices;        // v[0] < v[1]
  std::array<int, 2> cells{-1, -1};   // cells[1] == -1 on the boundary
  bool boundary() const { return cells[1] < 0; }
};

/// Polygonal mesh of a planar domain. Cells are counter-clockwise vertex
/// loops; hanging nodes appear as ordinary vertices in both adjacent loops.
class PolygonalMesh2 {
 public:
  PolygonalMesh2() = default;
  /// Validates the loops and builds the edge tables; throws InvalidMesh.
  PolygonalMesh2(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::vector<int>& cell(int c) const { return cells_.at(c); }

  /// Edge ids of cell c in loop order: entry i joins loop[i] and loop[i+1].
  const std::vector<int>& cell_edges(int c) const { return cell_edges_.at(c); }
  bool boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  std::vector<bool> boundary_edge_flags() const;

  std::vector<Vec2> cell_polygon(int c) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<std::uint8_t> boundary_vertex_;
};

struct FaceRef {
  int face;
  int sign;  // +1 when the stored face loop's right-hand normal points out of the cell
};

/// Polyhedral mesh: planar polygonal faces shared between cells, cells as
/// signed face lists.
class PolyhedralMesh3 {
 public:
  PolyhedralMesh3() = default;
  PolyhedralMesh3(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces,
                  std::vector<std::vector<FaceRef>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<std::vector<FaceRef>>& cells() const { return cells_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<int>& face(int f) const { return faces_.at(f); }
  const std::vector<FaceRef>& cell(int c) const { return cells_.at(c); }

  /// Edge ids of face f in loop order.
  const std::vector<int>& face_edges(int f) const { return face_edges_.at(f); }
  const std::array<int, 2>& face_cells(int f) const { return face_cells_.at(f); }
  bool boundary_face(int f) const { return face_cells_[f][1] < 0; }
  bool boundary_edge(int e) const { return boundary_edge_[e] != 0; }
  bool boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }

  /// Sorted global vertex / edge ids touched by cell c.
  std::vector<int> cell_vertices(int c) const;
  std::vector<int> cell_edge_ids(int c) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<std::vector<FaceRef>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> face_edges_;
  std::vector<std::array<int, 2>> face_cells_;
  std::vector<std::uint8_t> boundary_edge_;
  std::vector<std::uint8_t> boundary_vertex_;
};

struct SquareFamily {
  enum class Kind { Uniform, SmallEdge, Hanging, Distorted };
  Kind kind = Kind::Uniform;
  double epsilon = 0.0;        // SmallEdge: relative position of the inserted vertex
  bool epsilon_h2 = false;     // SmallEdge: use epsilon = (1/n)^2
  std::uint64_t seed = 0;      // Distorted

  /// "uniform", "smalledge:EPS", "smalledge:h2", "hanging", "distorted:SEED".
  static SquareFamily parse(const std::string& text);
  std::string name() const;
};

struct CubeFamily {
  enum class Kind { Uniform, FaceSplit };
  Kind kind = Kind::Uniform;
  double epsilon = 0.0;

  /// "uniform", "facesplit:EPS".
  static CubeFamily parse(const std::string& text);
  std::string name() const;
};

/// Unit-square meshes with n cells per side.
PolygonalMesh2 generate_square_mesh(int n, const SquareFamily& family);

/// Unit-cube meshes with n^3 hexahedral cells (possibly with split edges).
PolyhedralMesh3 generate_cube_mesh(int n, const CubeFamily& family);

}  // namespace vem
