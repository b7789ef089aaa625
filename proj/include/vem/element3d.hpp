#pragma once

#include "vem/element2d.hpp"
#include "vem/geometry.hpp"
#include "vem/mesh.hpp"

#include <array>
#include <functional>
#include <vector>

namespace vem {

/// A single polyhedral cell in local numbering. Local vertices are ordered
/// by global id, so the local edge direction low -> high agrees with the
/// mesh's canonical edge direction.
struct Polyhedron {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // loops in local vertex indices, stored orientation
  std::vector<int> signs;               // +1 when the loop normal points out of the cell
  std::vector<int> vertex_ids;          // global ids (empty for standalone cells)
  std::vector<int> face_ids;
};

Polyhedron mesh_polyhedron(const PolyhedralMesh3& mesh, int cell);

/// Local dofs of the order-k 3D space:
///   vertex values | k-1 Lobatto nodes per edge (low -> high vertex) |
///   dim P_{k-2} scaled moments per face | dim P_{k-2} cell moments
class DofLayout3 {
 public:
  DofLayout3() = default;
  DofLayout3(int nv, int ne, int nf, int k) : nv_(nv), ne_(ne), nf_(nf), k_(k) {}

  int order() const { return k_; }
  int num_vertices() const { return nv_; }
  int num_edges() const { return ne_; }
  int num_faces() const { return nf_; }
  int face_moments() const { return poly_dim(2, k_ - 2); }
  int num_moments() const { return poly_dim(3, k_ - 2); }
  int num_nodes() const { return nv_ + ne_ * (k_ - 1); }
  int num_boundary() const { return num_nodes() + nf_ * face_moments(); }
  int size() const { return num_boundary() + num_moments(); }

  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int j) const { return nv_ + e * (k_ - 1) + j; }
  int face_dof(int f, int a) const { return num_nodes() + f * face_moments() + a; }
  int moment_dof(int a) const { return num_boundary() + a; }

 private:
  int nv_ = 0, ne_ = 0, nf_ = 0, k_ = 1;
};

/// Per-cell operators of the 3D virtual element space, built on 2D
/// elements for the faces. Coefficient matrices refer to the scaled
/// monomials centred at the cell centroid with scale h_D.
class Element3 {
 public:
  Element3(Polyhedron poly, int k, ElementOptions options = {});

  int order() const { return k_; }
  const Polyhedron& polyhedron() const { return poly_; }
  const CellGeometry3& geometry() const { return geom_; }
  const DofLayout3& layout() const { return layout_; }
  const ScaledMonomials<3>& basis() const { return basis_; }
  const QuadratureRule<3>& rule() const { return rule_; }
  /// Local edges as (low, high) local vertex pairs, sorted.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  /// Positions of the vertex and edge-node dofs.
  const std::vector<Vec3>& nodes() const { return nodes_; }

  /// 2D element on face f in its frame, and the map from its dofs to cell dofs.
  const Element2& face_element(int f) const { return faces_[f]; }
  const FaceGeometry& face_geometry(int f) const { return face_geoms_[f]; }
  const std::vector<int>& face_dofs(int f) const { return face_dofs_[f]; }

  const Eigen::MatrixXd& mass() const { return mass_; }
  const Eigen::MatrixXd& poly_stiffness() const { return stiff_; }
  const Eigen::MatrixXd& monomial_dofs() const { return dofs_of_monomials_; }
  const Eigen::MatrixXd& projector_nabla() const { return pi_nabla_; }
  Eigen::MatrixXd projector_nabla_dofs() const { return dofs_of_monomials_ * pi_nabla_; }
  const Eigen::MatrixXd& projector_zero() const { return pi_zero_; }
  Eigen::MatrixXd load_projector() const;

  /// Face-based stabilisation; only Stabilization::Face3D is accepted.
  Eigen::MatrixXd stabilization(Stabilization s) const;
  Eigen::MatrixXd local_stiffness(Stabilization s) const;
  Eigen::VectorXd local_load(const ScalarField3& f) const;
  Eigen::VectorXd interpolate(const ScalarField3& zeta) const;

 private:
  void build_faces(const ElementOptions& options);
  void build_projectors(const ElementOptions& options);

  int k_;
  Polyhedron poly_;
  CellGeometry3 geom_;
  DofLayout3 layout_;
  ScaledMonomials<3> basis_;
  QuadratureRule<3> rule_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<Vec3> nodes_;
  std::vector<Element2> faces_;
  std::vector<FaceGeometry> face_geoms_;
  std::vector<std::vector<int>> face_dofs_;
  std::vector<Eigen::MatrixXd> face_traces_;  // cell monomials restricted to each face
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd stiff_;
  Eigen::MatrixXd dofs_of_monomials_;
  Eigen::MatrixXd pi_nabla_;
  Eigen::MatrixXd pi_zero_;
  Eigen::MatrixXd moments_;
};

}  // namespace vem
