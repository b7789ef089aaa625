#include "vem/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vem {

namespace {

QuadratureRule<2> cell_rule(const Element2& el, int degree) {
  return polygon_rule(el.polygon(), el.geometry().star_center, degree);
}

QuadratureRule<3> cell_rule(const Element3& el, int degree) {
  std::vector<Vec3> centers;
  for (int f = 0; f < el.layout().num_faces(); ++f) {
    const FaceGeometry& fg = el.face_geometry(f);
    centers.push_back(fg.frame.to_global(fg.planar.star_center));
  }
  return polyhedron_rule(el.polyhedron().vertices, el.polyhedron().faces, centers, el.geometry().star_center,
                         degree);
}

struct Squared {
  double h1_nabla = 0.0, h1_zero = 0.0, l2_nabla = 0.0, l2_zero = 0.0;
};

template <int Dim>
Squared projected(const Discretization<Dim>& disc, const Eigen::VectorXd& uh, const ManufacturedCase<Dim>& c,
                  int degree) {
  const int k = disc.order();
  if (degree < 0) degree = 2 * k + 6;
  Squared s;
  for (int cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    const auto& el = disc.elements()[cell];
    const Eigen::VectorXd v = disc.cell_values(uh, cell);
    const Eigen::VectorXd pn = el.projector_nabla() * v;
    const Eigen::VectorXd p0 = el.projector_zero() * v;
    const auto rule = cell_rule(el, degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& x = rule.points[q];
      const double w = rule.weights[q];
      const Eigen::VectorXd m = el.basis().values(x);
      const Eigen::Matrix<double, Dim, Eigen::Dynamic> dm = el.basis().gradients(x);
      const double u = c.u(x);
      const Point<Dim> g = c.grad(x);
      s.l2_nabla += w * std::pow(u - m.dot(pn), 2);
      s.l2_zero += w * std::pow(u - m.dot(p0), 2);
      s.h1_nabla += w * (g - dm * pn).squaredNorm();
      s.h1_zero += w * (g - dm * p0).squaredNorm();
    }
  }
  return s;
}

std::vector<double> edge_samples(int points) {
  std::vector<double> t{0.0, 1.0};
  for (int i = 0; i < points; ++i) t.push_back(0.5 * (1.0 - std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * points))));
  return t;
}

}  // namespace

template <int Dim>
ProjectedErrors error_h1_projected(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                                   const ManufacturedCase<Dim>& c, int degree) {
  const Squared s = projected(disc, uh, c, degree);
  return {std::sqrt(s.h1_nabla), std::sqrt(s.h1_zero)};
}

template <int Dim>
ProjectedErrors error_l2_projected(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                                   const ManufacturedCase<Dim>& c, int degree) {
  const Squared s = projected(disc, uh, c, degree);
  return {std::sqrt(s.l2_nabla), std::sqrt(s.l2_zero)};
}

template <int Dim>
double error_linf_edges(const Discretization<Dim>& disc, const Eigen::VectorXd& uh, const ManufacturedCase<Dim>& c,
                        int points) {
  const int k = disc.order();
  const std::vector<double> ts = edge_samples(points < 0 ? 4 * k + 1 : points);
  double worst = 0.0;
  for (int cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    const auto& el = disc.elements()[cell];
    const Eigen::VectorXd v = disc.cell_values(uh, cell);
    if constexpr (Dim == 2) {
      const auto& poly = el.polygon();
      const int n = static_cast<int>(poly.size());
      for (int e = 0; e < n; ++e)
        for (double t : ts) {
          const Vec2 x = poly[e] + t * (poly[(e + 1) % n] - poly[e]);
          worst = std::max(worst, std::abs(c.u(x) - el.trace_value(v, e, t)));
        }
    } else {
      const Lagrange1D lagrange(gauss_lobatto(k + 1).points);
      const auto& lay = el.layout();
      for (int e = 0; e < lay.num_edges(); ++e) {
        const auto [a, b] = el.edges()[e];
        std::vector<double> vals{v[lay.vertex_dof(a)]};
        for (int j = 0; j + 1 < k; ++j) vals.push_back(v[lay.edge_dof(e, j)]);
        vals.push_back(v[lay.vertex_dof(b)]);
        const Vec3& pa = el.nodes()[lay.vertex_dof(a)];
        const Vec3& pb = el.nodes()[lay.vertex_dof(b)];
        for (double t : ts) {
          double s = 0.0;
          for (int j = 0; j <= k; ++j) s += vals[j] * lagrange.value(j, t);
          worst = std::max(worst, std::abs(c.u(Vec3(pa + t * (pb - pa))) - s));
        }
      }
    }
  }
  return worst;
}

template <int Dim>
EnergyError energy_norm_error(const Discretization<Dim>& disc, const Eigen::VectorXd& uh,
                              const ManufacturedCase<Dim>& c) {
  const Eigen::VectorXd d = disc.interpolate(c.u) - uh;
  double energy = 0.0;
  for (int cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    const Eigen::VectorXd dc = disc.cell_values(d, cell);
    energy += dc.dot(disc.local_stiffness(cell) * dc);
  }
  energy = std::max(energy, 0.0);
  return {std::sqrt(energy), energy};
}

template <int Dim>
ErrorNorms error_norms(const Discretization<Dim>& disc, const Eigen::VectorXd& uh, const ManufacturedCase<Dim>& c) {
  const Squared s = projected(disc, uh, c, -1);
  ErrorNorms e;
  e.energy = energy_norm_error(disc, uh, c).norm;
  e.h1_nabla = std::sqrt(s.h1_nabla);
  e.h1_zero = std::sqrt(s.h1_zero);
  e.l2_zero = std::sqrt(s.l2_zero);
  e.l2_nabla = std::sqrt(s.l2_nabla);
  e.linf_edge = error_linf_edges(disc, uh, c);
  return e;
}

#define VEM_NORMS(D)                                                                                              \
  template ProjectedErrors error_h1_projected<D>(const Discretization<D>&, const Eigen::VectorXd&,              \
                                                 const ManufacturedCase<D>&, int);                              \
  template ProjectedErrors error_l2_projected<D>(const Discretization<D>&, const Eigen::VectorXd&,              \
                                                 const ManufacturedCase<D>&, int);                              \
  template double error_linf_edges<D>(const Discretization<D>&, const Eigen::VectorXd&,                         \
                                      const ManufacturedCase<D>&, int);                                         \
  template EnergyError energy_norm_error<D>(const Discretization<D>&, const Eigen::VectorXd&,                   \
                                            const ManufacturedCase<D>&);                                        \
  template ErrorNorms error_norms<D>(const Discretization<D>&, const Eigen::VectorXd&, const ManufacturedCase<D>&);

VEM_NORMS(2)
VEM_NORMS(3)

}  // namespace vem
