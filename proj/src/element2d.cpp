#include "vem/element2d.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace vem {

Element2::Element2(std::vector<Vec2> polygon, int k, ElementOptions options)
    : k_(k), polygon_(std::move(polygon)) {
  if (k < 1) throw InvalidArgument("Element2: order must be >= 1");
  geom_ = polygon_geometry(polygon_);
  const int nv = static_cast<int>(polygon_.size());
  layout_ = DofLayout2(nv, k);
  basis_ = ScaledMonomials<2>(geom_.centroid, geom_.diameter, k);
  lobatto_ = Lagrange1D(gauss_lobatto(k + 1).points);
  rule_ = polygon_rule(polygon_, geom_.star_center, 2 * k);

  nodes_.resize(layout_.num_boundary());
  for (int v = 0; v < nv; ++v) nodes_[layout_.vertex_dof(v)] = polygon_[v];
  for (int e = 0; e < nv; ++e) {
    const Vec2& a = polygon_[e];
    const Vec2& b = polygon_[(e + 1) % nv];
    for (int j = 0; j + 1 < k; ++j) nodes_[layout_.edge_dof(e, j)] = a + lobatto_.nodes()[j + 1] * (b - a);
  }

  mass_ = mass_matrix(basis_, rule_);
  stiff_ = stiffness_matrix(basis_, rule_);
  build_projectors(options);
}

void Element2::build_projectors(const ElementOptions& options) {
  const int nk = basis_.size();
  const int N = layout_.size();
  const int nv = layout_.num_vertices();
  const double area = geom_.area;

  dofs_of_monomials_.resize(N, nk);
  for (int i = 0; i < layout_.num_boundary(); ++i) dofs_of_monomials_.row(i) = basis_.values(nodes_[i]).transpose();
  for (int a = 0; a < layout_.num_moments(); ++a)
    dofs_of_monomials_.row(layout_.moment_dof(a)) = mass_.row(a) / area;

  // Right-hand side of the energy projection: boundary flux term plus the
  // volume term carried by the internal moments.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, N);
  Eigen::MatrixXd G = stiff_;
  G.row(0).setZero();
  const Rule1D gl = gauss_legendre(k_ + 1);
  for (int e = 0; e < nv; ++e) {
    const Vec2& a = polygon_[e];
    const Vec2& b = polygon_[(e + 1) % nv];
    const Vec2 d = b - a;
    const double he = d.norm();
    const Vec2 normal(d.y() / he, -d.x() / he);
    const auto ids = layout_.edge_nodes(e);
    for (std::size_t q = 0; q < gl.points.size(); ++q) {
      const double t = gl.points[q];
      const double w = gl.weights[q] * he;
      const Vec2 x = a + t * d;
      const Eigen::RowVectorXd flux = normal.transpose() * basis_.gradients(x);
      const Eigen::VectorXd mvals = basis_.values(x);
      G.row(0) += (w / geom_.perimeter) * mvals.transpose();
      for (int j = 0; j <= k_; ++j) {
        const double lj = lobatto_.value(j, t);
        B.col(ids[j]).tail(nk - 1) += w * lj * flux.tail(nk - 1).transpose();
        B(0, ids[j]) += w * lj / geom_.perimeter;
      }
    }
  }
  if (k_ >= 2) {
    const Eigen::MatrixXd lap = basis_.laplacian_matrix();
    for (int a = 1; a < nk; ++a)
      for (int m = 0; m < layout_.num_moments(); ++m) B(a, layout_.moment_dof(m)) -= area * lap(m, a);
  }

  pi_nabla_ = solve_equilibrated(G, B, "Element2");

  // L2 projection: Pi^0 v = Pi^nabla v + r with r in P_{k-2} fixed by the
  // internal moments.
  pi_zero_ = pi_nabla_;
  const int s = layout_.num_moments();
  if (s > 0) {
    Eigen::MatrixXd rhs = -(mass_.topRows(s) * pi_nabla_);
    for (int m = 0; m < s; ++m) rhs(m, layout_.moment_dof(m)) += area;
    const Eigen::MatrixXd hs = mass_.topLeftCorner(s, s);
    if (options.orthonormalize && k_ >= 3) {
      const Orthonormalization on = orthonormalize(hs);
      pi_zero_.topRows(s) += on.Q.transpose() * (on.Q * rhs);
    } else {
      const Eigen::LLT<Eigen::MatrixXd> llt(hs);
      if (llt.info() != Eigen::Success) throw NotSPD("Element2: mass matrix is not positive definite");
      pi_zero_.topRows(s) += llt.solve(rhs);
    }
  }
  moments_ = mass_ * pi_zero_;
  for (int m = 0; m < s; ++m) {
    moments_.row(m).setZero();
    moments_(m, layout_.moment_dof(m)) = area;
  }
}

Eigen::MatrixXd Element2::load_projector() const {
  if (k_ == 1) return pi_zero_;
  const int n = (k_ <= 2) ? poly_dim(2, 1) : poly_dim(2, k_ - 2);
  const Eigen::MatrixXd h = mass_.topLeftCorner(n, n);
  return h.llt().solve(moments_.topRows(n));
}

Eigen::MatrixXd Element2::stabilization(Stabilization s) const {
  const int N = layout_.size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  switch (s) {
    case Stabilization::S1:
      for (int i = 0; i < layout_.num_boundary(); ++i) S(i, i) = 1.0;
      return S;
    case Stabilization::S2:
    case Stabilization::S2Tilde: {
      const int np = k_ + 1;
      Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(np, np);  // \int_0^1 L_a' L_b' dt
      const Rule1D gl = gauss_legendre(k_ + 1);
      for (std::size_t q = 0; q < gl.points.size(); ++q) {
        Eigen::VectorXd dl(np);
        for (int a = 0; a < np; ++a) dl[a] = lobatto_.derivative(a, gl.points[q]);
        d1 += gl.weights[q] * dl * dl.transpose();
      }
      for (int e = 0; e < layout_.num_vertices(); ++e) {
        const double he = geom_.edge_lengths[e];
        const double weight = (s == Stabilization::S2 ? geom_.diameter : he) / he;
        const auto ids = layout_.edge_nodes(e);
        for (int a = 0; a < np; ++a)
          for (int b = 0; b < np; ++b) S(ids[a], ids[b]) += weight * d1(a, b);
      }
      return S;
    }
    case Stabilization::Face3D:
      break;
  }
  throw InvalidArgument("Element2: stabilization '" + std::string(to_string(s)) + "' is 3D only");
}

Eigen::MatrixXd Element2::local_stiffness(Stabilization s) const {
  const int N = layout_.size();
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(N, N) - projector_nabla_dofs();
  Eigen::MatrixXd K = pi_nabla_.transpose() * stiff_ * pi_nabla_ +
                      residual.transpose() * stabilization(s) * residual;
  return 0.5 * (K + K.transpose());
}

Eigen::VectorXd Element2::local_load(const ScalarField2& f) const {
  const Eigen::MatrixXd xi = load_projector();
  const int n = static_cast<int>(xi.rows());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < rule_.size(); ++q)
    g += rule_.weights[q] * f(rule_.points[q]) * basis_.values(rule_.points[q]).head(n);
  return xi.transpose() * g;
}

Eigen::VectorXd Element2::interpolate(const ScalarField2& zeta) const {
  Eigen::VectorXd v(layout_.size());
  for (int i = 0; i < layout_.num_boundary(); ++i) v[i] = zeta(nodes_[i]);
  const int nm = layout_.num_moments();
  if (nm > 0) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(nm);
    for (std::size_t q = 0; q < rule_.size(); ++q)
      m += rule_.weights[q] * zeta(rule_.points[q]) * basis_.values(rule_.points[q]).head(nm);
    v.tail(nm) = m / geom_.area;
  }
  return v;
}

double Element2::trace_value(const Eigen::VectorXd& v, int e, double t) const {
  const auto ids = layout_.edge_nodes(e);
  double s = 0.0;
  for (int j = 0; j <= k_; ++j) s += v[ids[j]] * lobatto_.value(j, t);
  return s;
}

double Element2::seminorm_tbar(const Eigen::VectorXd& v) const {
  double sum = 0.0;
  const int nm = layout_.num_moments();
  if (nm > 0) {
    const Eigen::VectorXd d = v.tail(nm);
    const Eigen::MatrixXd h = mass_.topLeftCorner(nm, nm);
    sum += geom_.area * geom_.area * d.dot(h.llt().solve(d));
  }
  // Orthonormal shifted Legendre polynomials of degree < k on each edge.
  const Rule1D gl = gauss_legendre(k_ + 1);
  double edges = 0.0;
  for (int e = 0; e < layout_.num_vertices(); ++e) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k_);
    for (std::size_t q = 0; q < gl.points.size(); ++q) {
      const double t = gl.points[q];
      const double p = trace_value(v, e, t);
      for (int j = 0; j < k_; ++j) c[j] += gl.weights[q] * p * std::sqrt(2.0 * j + 1.0) * legendre(j, 2.0 * t - 1.0);
    }
    edges += geom_.edge_lengths[e] * c.squaredNorm();
  }
  sum += geom_.diameter * edges;
  return std::sqrt(sum);
}

int kernel_dimension(const Eigen::MatrixXd& k_local, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_local, Eigen::EigenvaluesOnly);
  const double threshold = rel_tol * k_local.trace();
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) < threshold) ++count;
  return count;
}

}  // namespace vem
