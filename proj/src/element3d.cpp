#include "vem/element3d.hpp"

#include <algorithm>
#include <map>

namespace vem {

Polyhedron mesh_polyhedron(const PolyhedralMesh3& mesh, int cell) {
  if (cell < 0 || cell >= mesh.num_cells()) throw InvalidArgument("mesh_polyhedron: invalid cell id");
  Polyhedron p;
  p.vertex_ids = mesh.cell_vertices(cell);
  std::map<int, int> local;
  for (std::size_t i = 0; i < p.vertex_ids.size(); ++i) {
    local[p.vertex_ids[i]] = static_cast<int>(i);
    p.vertices.push_back(mesh.vertices()[p.vertex_ids[i]]);
  }
  for (const FaceRef& fr : mesh.cell(cell)) {
    std::vector<int> loop;
    for (int v : mesh.face(fr.face)) loop.push_back(local.at(v));
    p.faces.push_back(std::move(loop));
    p.signs.push_back(fr.sign);
    p.face_ids.push_back(fr.face);
  }
  return p;
}

Element3::Element3(Polyhedron poly, int k, ElementOptions options) : k_(k), poly_(std::move(poly)) {
  if (k < 1) throw InvalidArgument("Element3: order must be >= 1");
  if (poly_.signs.size() != poly_.faces.size()) throw InvalidArgument("Element3: one sign per face required");
  geom_ = polyhedron_geometry(poly_.vertices, poly_.faces, poly_.signs);

  for (const auto& loop : poly_.faces)
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i], b = loop[(i + 1) % loop.size()];
      edges_.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const int nv = static_cast<int>(poly_.vertices.size());
  const int ne = static_cast<int>(edges_.size());
  const int nf = static_cast<int>(poly_.faces.size());
  layout_ = DofLayout3(nv, ne, nf, k);
  basis_ = ScaledMonomials<3>(geom_.centroid, geom_.diameter, k);

  const Rule1D lob = gauss_lobatto(k + 1);
  nodes_.resize(layout_.num_nodes());
  for (int v = 0; v < nv; ++v) nodes_[layout_.vertex_dof(v)] = poly_.vertices[v];
  for (int e = 0; e < ne; ++e) {
    const Vec3& a = poly_.vertices[edges_[e][0]];
    const Vec3& b = poly_.vertices[edges_[e][1]];
    for (int j = 0; j + 1 < k; ++j) nodes_[layout_.edge_dof(e, j)] = a + lob.points[j + 1] * (b - a);
  }

  build_faces(options);

  std::vector<Vec3> centers;
  for (const auto& fg : face_geoms_) centers.push_back(fg.frame.to_global(fg.planar.star_center));
  rule_ = polyhedron_rule(poly_.vertices, poly_.faces, centers, geom_.star_center, 2 * k);
  mass_ = mass_matrix(basis_, rule_);
  stiff_ = stiffness_matrix(basis_, rule_);
  build_projectors(options);
}

void Element3::build_faces(const ElementOptions& options) {
  const int nf = layout_.num_faces();
  faces_.reserve(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& loop = poly_.faces[f];
    std::vector<Vec3> pts;
    for (int v : loop) pts.push_back(poly_.vertices[v]);
    face_geoms_.push_back(vem::face_geometry(pts));
    faces_.emplace_back(face_geoms_.back().local_polygon, k_, options);
    const Element2& fe = faces_.back();
    const DofLayout2& fl = fe.layout();

    std::vector<int> map(fl.size());
    const int n = static_cast<int>(loop.size());
    for (int j = 0; j < n; ++j) {
      map[fl.vertex_dof(j)] = layout_.vertex_dof(loop[j]);
      const int a = loop[j], b = loop[(j + 1) % n];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const int e = static_cast<int>(std::lower_bound(edges_.begin(), edges_.end(), key) - edges_.begin());
      for (int t = 0; t + 1 < k_; ++t) map[fl.edge_dof(j, t)] = layout_.edge_dof(e, a < b ? t : k_ - 2 - t);
    }
    for (int a = 0; a < fl.num_moments(); ++a) map[fl.moment_dof(a)] = layout_.face_dof(f, a);
    face_dofs_.push_back(std::move(map));

    // Cell monomials restricted to the face, in the face element's scaled monomials.
    const FaceFrame& fr = face_geoms_.back().frame;
    const double hf = fe.basis().scale();
    Eigen::Matrix<double, 3, 2> A;
    A.col(0) = hf * fr.axis1;
    A.col(1) = hf * fr.axis2;
    face_traces_.push_back(affine_trace<3, 2>(basis_, fr.to_global(fe.basis().center()), A));
  }
}

void Element3::build_projectors(const ElementOptions& options) {
  const int nk = basis_.size();
  const int N = layout_.size();
  const double volume = geom_.volume;
  const double surface = geom_.surface_area;

  dofs_of_monomials_ = Eigen::MatrixXd::Zero(N, nk);
  for (int i = 0; i < layout_.num_nodes(); ++i) dofs_of_monomials_.row(i) = basis_.values(nodes_[i]).transpose();
  const int sf = layout_.face_moments();
  for (int f = 0; f < layout_.num_faces(); ++f) {
    if (sf == 0) break;
    const Element2& fe = faces_[f];
    const Eigen::MatrixXd hm = fe.mass().topRows(sf) * face_traces_[f];
    for (int a = 0; a < sf; ++a) dofs_of_monomials_.row(layout_.face_dof(f, a)) = hm.row(a) / fe.geometry().area;
  }
  for (int a = 0; a < layout_.num_moments(); ++a)
    dofs_of_monomials_.row(layout_.moment_dof(a)) = mass_.row(a) / volume;

  // Normal derivative n . grad m_alpha as cell-basis coefficients, per face.
  Eigen::MatrixXd G = stiff_;
  G.row(0).setZero();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, N);
  for (int f = 0; f < layout_.num_faces(); ++f) {
    const Element2& fe = faces_[f];
    const Vec3 normal = poly_.signs[f] * face_geoms_[f].frame.normal;
    Eigen::MatrixXd nd = Eigen::MatrixXd::Zero(nk, nk);
    for (int c = 0; c < 3; ++c) {
      const Eigen::MatrixXd dc = basis_.derivative_matrix(c);
      nd.topRows(dc.rows()) += normal[c] * dc;
    }
    const Eigen::MatrixXd& T = face_traces_[f];
    const Eigen::MatrixXd& H = fe.mass();
    // \int_F phi (n . grad m_alpha) = (T nd)^T H Pi^0_F phi
    const Eigen::MatrixXd flux = (T * nd).transpose() * H * fe.projector_zero();
    const Eigen::RowVectorXd mean = H.row(0) * fe.projector_zero() / surface;
    G.row(0) += H.row(0) * T / surface;
    const auto& map = face_dofs_[f];
    for (int i = 0; i < static_cast<int>(map.size()); ++i) {
      B.col(map[i]).tail(nk - 1) += flux.col(i).tail(nk - 1);
      B(0, map[i]) += mean[i];
    }
  }
  if (k_ >= 2) {
    const Eigen::MatrixXd lap = basis_.laplacian_matrix();
    for (int a = 1; a < nk; ++a)
      for (int m = 0; m < layout_.num_moments(); ++m) B(a, layout_.moment_dof(m)) -= volume * lap(m, a);
  }
  pi_nabla_ = solve_equilibrated(G, B, "Element3");

  pi_zero_ = pi_nabla_;
  const int s = layout_.num_moments();
  if (s > 0) {
    Eigen::MatrixXd rhs = -(mass_.topRows(s) * pi_nabla_);
    for (int m = 0; m < s; ++m) rhs(m, layout_.moment_dof(m)) += volume;
    const Eigen::MatrixXd hs = mass_.topLeftCorner(s, s);
    if (options.orthonormalize && k_ >= 3) {
      const Orthonormalization on = orthonormalize(hs);
      pi_zero_.topRows(s) += on.Q.transpose() * (on.Q * rhs);
    } else {
      const Eigen::LLT<Eigen::MatrixXd> llt(hs);
      if (llt.info() != Eigen::Success) throw NotSPD("Element3: mass matrix is not positive definite");
      pi_zero_.topRows(s) += llt.solve(rhs);
    }
  }
  moments_ = mass_ * pi_zero_;
  for (int m = 0; m < s; ++m) {
    moments_.row(m).setZero();
    moments_(m, layout_.moment_dof(m)) = volume;
  }
}

Eigen::MatrixXd Element3::load_projector() const {
  if (k_ == 1) return pi_zero_;
  const int n = (k_ <= 2) ? poly_dim(3, 1) : poly_dim(3, k_ - 2);
  const Eigen::MatrixXd h = mass_.topLeftCorner(n, n);
  return h.llt().solve(moments_.topRows(n));
}

Eigen::MatrixXd Element3::stabilization(Stabilization s) const {
  if (s != Stabilization::Face3D)
    throw InvalidArgument("Element3: stabilization '" + std::string(to_string(s)) + "' is 2D only");
  const int N = layout_.size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  const int sf = layout_.face_moments();
  for (int f = 0; f < layout_.num_faces(); ++f) {
    const Element2& fe = faces_[f];
    const auto& map = face_dofs_[f];
    // Nodes of the face, each counted once per face.
    for (int i = 0; i < fe.layout().num_boundary(); ++i) S(map[i], map[i]) += 1.0;
    if (sf > 0) {
      // ||Pi^0_{k-2,F} v||^2 = |F|^2 d^T H_s^{-1} d
      const double area = fe.geometry().area;
      const double hf = fe.geometry().diameter;
      const Eigen::MatrixXd hs = fe.mass().topLeftCorner(sf, sf);
      const Eigen::MatrixXd block = (area * area / (hf * hf)) * hs.llt().solve(Eigen::MatrixXd::Identity(sf, sf));
      for (int a = 0; a < sf; ++a)
        for (int b = 0; b < sf; ++b) S(layout_.face_dof(f, a), layout_.face_dof(f, b)) += block(a, b);
    }
  }
  return geom_.diameter * S;
}

Eigen::MatrixXd Element3::local_stiffness(Stabilization s) const {
  const int N = layout_.size();
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(N, N) - projector_nabla_dofs();
  Eigen::MatrixXd K = pi_nabla_.transpose() * stiff_ * pi_nabla_ +
                      residual.transpose() * stabilization(s) * residual;
  return 0.5 * (K + K.transpose());
}

Eigen::VectorXd Element3::local_load(const ScalarField3& f) const {
  const Eigen::MatrixXd xi = load_projector();
  const int n = static_cast<int>(xi.rows());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < rule_.size(); ++q)
    g += rule_.weights[q] * f(rule_.points[q]) * basis_.values(rule_.points[q]).head(n);
  return xi.transpose() * g;
}

Eigen::VectorXd Element3::interpolate(const ScalarField3& zeta) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout_.size());
  for (int i = 0; i < layout_.num_nodes(); ++i) v[i] = zeta(nodes_[i]);
  const int sf = layout_.face_moments();
  for (int f = 0; f < layout_.num_faces() && sf > 0; ++f) {
    const Element2& fe = faces_[f];
    const FaceFrame& fr = face_geoms_[f].frame;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(sf);
    for (std::size_t q = 0; q < fe.rule().size(); ++q) {
      const Vec2& y = fe.rule().points[q];
      m += fe.rule().weights[q] * zeta(fr.to_global(y)) * fe.basis().values(y).head(sf);
    }
    for (int a = 0; a < sf; ++a) v[layout_.face_dof(f, a)] = m[a] / fe.geometry().area;
  }
  const int nm = layout_.num_moments();
  if (nm > 0) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(nm);
    for (std::size_t q = 0; q < rule_.size(); ++q)
      m += rule_.weights[q] * zeta(rule_.points[q]) * basis_.values(rule_.points[q]).head(nm);
    v.tail(nm) = m / geom_.volume;
  }
  return v;
}

}  // namespace vem
