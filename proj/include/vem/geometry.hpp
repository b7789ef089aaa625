#pragma once

#include "vem/mesh.hpp"

#include <span>
#include <vector>

namespace vem {

/// Exact geometry of a simple counter-clockwise polygon.
struct CellGeometry2 {
  double diameter = 0.0;   // max pairwise vertex distance
  double area = 0.0;
  double perimeter = 0.0;
  Vec2 centroid = Vec2::Zero();
  Vec2 star_center = Vec2::Zero();  // a point of the kernel used for fan quadrature
  Vec2 kernel_center = Vec2::Zero();  // Chebyshev center of the kernel
  double kernel_radius = 0.0;  // radius of the largest disc inside the kernel
  std::vector<double> edge_lengths;  // edge i joins vertex i and i+1

  double rho() const { return kernel_radius / diameter; }
  double tau() const;  // max edge / min edge
};

/// Throws KernelEmpty when no point sees every vertex.
CellGeometry2 polygon_geometry(std::span<const Vec2> polygon);
CellGeometry2 cell_geometry(const PolygonalMesh2& mesh, int cell);

/// Orthonormal in-plane frame of a planar face. `axis1 x axis2` is the
/// normal of the stored vertex loop, so the loop is counter-clockwise in
/// local coordinates.
struct FaceFrame {
  Vec3 origin = Vec3::Zero();  // face centroid
  Vec3 axis1 = Vec3::UnitX();
  Vec3 axis2 = Vec3::UnitY();
  Vec3 normal = Vec3::UnitZ();

  Vec2 to_local(const Vec3& x) const { return {(x - origin).dot(axis1), (x - origin).dot(axis2)}; }
  Vec3 to_global(const Vec2& y) const { return origin + y.x() * axis1 + y.y() * axis2; }
};

struct FaceGeometry {
  FaceFrame frame;
  std::vector<Vec2> local_polygon;  // stored loop in frame coordinates
  CellGeometry2 planar;             // 2D geometry of local_polygon
  double area() const { return planar.area; }
  double diameter() const { return planar.diameter; }
  Vec3 centroid() const { return frame.to_global(planar.centroid); }
};

FaceFrame face_frame(std::span<const Vec3> loop);
FaceGeometry face_geometry(std::span<const Vec3> loop);
FaceGeometry face_geometry(const PolyhedralMesh3& mesh, int face);

struct CellGeometry3 {
  double diameter = 0.0;
  double volume = 0.0;
  double surface_area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec3 star_center = Vec3::Zero();
  Vec3 kernel_center = Vec3::Zero();
  double kernel_radius = 0.0;
  std::vector<double> face_areas;      // in cell face order
  std::vector<double> face_diameters;

  double rho() const { return kernel_radius / diameter; }
};

/// Geometry of a closed polyhedron given as vertex loops; signs[i] is +1 when
/// the right-hand normal of faces[i] points outwards.
CellGeometry3 polyhedron_geometry(std::span<const Vec3> vertices, const std::vector<std::vector<int>>& faces,
                                  std::span<const int> signs);
CellGeometry3 cell_geometry(const PolyhedralMesh3& mesh, int cell);

/// Half-plane / half-space representation n.x <= b with unit n.
template <int Dim>
struct HalfSpace {
  Point<Dim> normal;
  double offset;
};

/// Largest ball inside the intersection of half-spaces, found by enumerating
/// vertices of the (Dim+1)-variable LP. Returns radius <= 0 when empty.
template <int Dim>
std::pair<Point<Dim>, double> chebyshev_center(std::span<const HalfSpace<Dim>> constraints);

}  // namespace vem
