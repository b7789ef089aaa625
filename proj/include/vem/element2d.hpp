#pragma once

#include "vem/geometry.hpp"
#include "vem/polybasis.hpp"
#include "vem/quadrature.hpp"
#include "vem/types.hpp"

#include <vector>

namespace vem {

/// Local degrees of freedom of the order-k virtual element space on a
/// polygon with `num_vertices` vertices:
///   [0, nv)                 vertex values
///   [nv, nv*k)              k-1 Gauss-Lobatto node values per edge, in loop direction
///   [nv*k, nv*k + dim P_{k-2})  internal moments (1/|D|) \int v m_alpha
class DofLayout2 {
 public:
  DofLayout2() = default;
  DofLayout2(int num_vertices, int k) : nv_(num_vertices), k_(k) {}

  int order() const { return k_; }
  int num_vertices() const { return nv_; }
  int num_boundary() const { return nv_ * k_; }
  int num_moments() const { return poly_dim(2, k_ - 2); }
  int size() const { return num_boundary() + num_moments(); }

  int vertex_dof(int i) const { return i; }
  int edge_dof(int e, int j) const { return nv_ + e * (k_ - 1) + j; }
  int moment_dof(int a) const { return num_boundary() + a; }
  bool is_boundary(int i) const { return i < num_boundary(); }

  /// The k+1 dofs along edge e (loop edge from vertex e to vertex e+1) in node order.
  std::vector<int> edge_nodes(int e) const {
    std::vector<int> out;
    out.push_back(vertex_dof(e));
    for (int j = 0; j + 1 < k_; ++j) out.push_back(edge_dof(e, j));
    out.push_back(vertex_dof((e + 1) % nv_));
    return out;
  }

 private:
  int nv_ = 0;
  int k_ = 1;
};

struct ElementOptions {
  /// Apply the Gram-Schmidt orthonormalised basis when inverting the mass
  /// matrix (only used for k >= 3).
  bool orthonormalize = false;
};

/// Per-cell operators of the 2D enhanced virtual element space.
///
/// The polynomial projections are expressed as coefficient matrices in the
/// scaled monomial basis centred at the centroid with scale h_D: column i of
/// projector_nabla() holds the coefficients of Pi^nabla phi_i.
class Element2 {
 public:
  Element2(std::vector<Vec2> polygon, int k, ElementOptions options = {});

  int order() const { return k_; }
  const std::vector<Vec2>& polygon() const { return polygon_; }
  const CellGeometry2& geometry() const { return geom_; }
  const DofLayout2& layout() const { return layout_; }
  const ScaledMonomials<2>& basis() const { return basis_; }
  const Lagrange1D& edge_basis() const { return lobatto_; }
  const QuadratureRule<2>& rule() const { return rule_; }  // exact to degree 2k

  /// Positions of the boundary dofs (vertices, then edge nodes).
  const std::vector<Vec2>& boundary_nodes() const { return nodes_; }

  const Eigen::MatrixXd& mass() const { return mass_; }            // \int m_a m_b
  const Eigen::MatrixXd& poly_stiffness() const { return stiff_; } // \int grad m_a . grad m_b
  const Eigen::MatrixXd& monomial_dofs() const { return dofs_of_monomials_; }  // N x n_k

  /// Coefficients of Pi^nabla (n_k x N).
  const Eigen::MatrixXd& projector_nabla() const { return pi_nabla_; }
  /// Pi^nabla as a map between dof vectors (N x N).
  Eigen::MatrixXd projector_nabla_dofs() const { return dofs_of_monomials_ * pi_nabla_; }
  /// Coefficients of Pi^0_k (n_k x N).
  const Eigen::MatrixXd& projector_zero() const { return pi_zero_; }
  /// Coefficients of the right-hand-side projector: Pi^0_1 for k <= 2,
  /// Pi^0_{k-2} for k >= 3.
  Eigen::MatrixXd load_projector() const;

  Eigen::MatrixXd stabilization(Stabilization s) const;
  Eigen::MatrixXd local_stiffness(Stabilization s) const;
  Eigen::VectorXd local_load(const ScalarField2& f) const;

  /// Dofs of the interpolant: nodal values on the boundary, quadrature moments inside.
  Eigen::VectorXd interpolate(const ScalarField2& zeta) const;

  /// |||v|||_{k,D}: L2 norm of Pi^0_{k-2} v plus h_D-weighted edge L2 norms of Pi^0_{k-1,e} v.
  double seminorm_tbar(const Eigen::VectorXd& v) const;

  /// Value of the (polynomial) boundary trace of v on edge e at t in [0, 1].
  double trace_value(const Eigen::VectorXd& v, int e, double t) const;

  double tau() const { return geom_.tau(); }

 private:
  void build_projectors(const ElementOptions& options);

  int k_;
  std::vector<Vec2> polygon_;
  CellGeometry2 geom_;
  DofLayout2 layout_;
  ScaledMonomials<2> basis_;
  Lagrange1D lobatto_;
  QuadratureRule<2> rule_;
  std::vector<Vec2> nodes_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd stiff_;
  Eigen::MatrixXd dofs_of_monomials_;
  Eigen::MatrixXd pi_nabla_;
  Eigen::MatrixXd pi_zero_;
  Eigen::MatrixXd moments_;  // \int phi_i m_a for all a (n_k x N)
};

/// Number of eigenvalues of the symmetric matrix below rel_tol * trace.
int kernel_dimension(const Eigen::MatrixXd& k_local, double rel_tol = 1e-12);

}  // namespace vem
