#pragma once

#include "vem/element2d.hpp"
#include "vem/element3d.hpp"
#include "vem/mesh.hpp"

#include <Eigen/Sparse>

#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

namespace vem {

/// Global numbering: vertices, then k-1 nodes per mesh edge (canonical
/// direction low -> high vertex id), then face moments (3D), then cell moments.
class GlobalDofMap {
 public:
  GlobalDofMap() = default;
  GlobalDofMap(const PolygonalMesh2& mesh, int k);
  GlobalDofMap(const PolyhedralMesh3& mesh, int k);

  int size() const { return static_cast<int>(boundary_.size()); }
  int num_free() const { return static_cast<int>(free_.size()); }
  int num_fixed() const { return size() - num_free(); }
  bool is_boundary(int g) const { return boundary_[g] != 0; }
  /// Free-system index of global dof g, or -1 when g lies on the boundary.
  int free_index(int g) const { return free_index_[g]; }
  const std::vector<int>& free_dofs() const { return free_; }
  /// Local-to-global map of cell c.
  const std::vector<int>& cell_dofs(int c) const { return cell_dofs_[c]; }

 private:
  void finish();

  std::vector<std::uint8_t> boundary_;
  std::vector<int> free_;
  std::vector<int> free_index_;
  std::vector<std::vector<int>> cell_dofs_;
};

struct GlobalSystem {
  Eigen::SparseMatrix<double> A;  // free x free
  Eigen::VectorXd b;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int direct_limit = 50000;  // use sparse Cholesky up to this many unknowns
};

struct SolveResult {
  Eigen::VectorXd x;
  std::string solver;  // "cholesky" or "cg"
  int iterations = 0;
  double residual = 0.0;  // relative residual ||b - Ax|| / ||b||
};

/// Direct sparse Cholesky for small systems, Jacobi-preconditioned CG above.
/// Throws NotSPD or NotConverged.
SolveResult solve(const GlobalSystem& system, const SolveOptions& options = {});

/// Symmetric coordinate format, 1-based, lower triangle.
void write_matrix_market(const std::filesystem::path& path, const Eigen::SparseMatrix<double>& A);

template <int Dim>
struct DimTraits;
template <>
struct DimTraits<2> {
  using Mesh = PolygonalMesh2;
  using Element = Element2;
  using Field = ScalarField2;
};
template <>
struct DimTraits<3> {
  using Mesh = PolyhedralMesh3;
  using Element = Element3;
  using Field = ScalarField3;
};

/// Elements, local matrices and the dof map of one mesh. Element
/// construction failures are rethrown with the cell id in the message.
template <int Dim>
class Discretization {
 public:
  using Mesh = typename DimTraits<Dim>::Mesh;
  using Element = typename DimTraits<Dim>::Element;
  using Field = typename DimTraits<Dim>::Field;

  Discretization(const Mesh& mesh, int k, Stabilization stab, ElementOptions options = {});

  const Mesh& mesh() const { return *mesh_; }
  int order() const { return k_; }
  Stabilization stabilization() const { return stab_; }
  const GlobalDofMap& dofs() const { return dofs_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Eigen::MatrixXd& local_stiffness(int c) const { return stiffness_[c]; }

  /// Free-dof system for -Laplace u = f with u = 0 on the boundary. With
  /// `lifting`, a full-length dof vector whose boundary entries are used as
  /// Dirichlet data, moved to the right-hand side.
  GlobalSystem assemble(const Field& f, const Eigen::VectorXd* lifting = nullptr) const;
  /// Stiffness matrix over all dofs, before boundary elimination.
  Eigen::SparseMatrix<double> assemble_full() const;

  /// Global interpolant of zeta (the cell-local interpolants agree on shared entities).
  Eigen::VectorXd interpolate(const Field& zeta) const;
  /// Full-length vector from free values plus boundary values (zero when no lifting is given).
  Eigen::VectorXd expand(const Eigen::VectorXd& free_values, const Eigen::VectorXd* lifting = nullptr) const;
  Eigen::VectorXd cell_values(const Eigen::VectorXd& global, int c) const;

 private:
  const Mesh* mesh_;
  int k_;
  Stabilization stab_;
  GlobalDofMap dofs_;
  std::vector<Element> elements_;
  std::vector<Eigen::MatrixXd> stiffness_;
};

using Discretization2 = Discretization<2>;
using Discretization3 = Discretization<3>;

}  // namespace vem
