#pragma once

#include "vem/types.hpp"

#include <span>
#include <vector>

namespace vem {

template <int Dim>
struct QuadratureRule {
  std::vector<Point<Dim>> points;
  std::vector<double> weights;
  int degree = 0;  // polynomials up to this total degree are integrated exactly

  std::size_t size() const { return weights.size(); }

  double measure() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

struct Rule1D {
  std::vector<double> points;   // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with `n` points on [0, 1], exact to degree 2n-1.
Rule1D gauss_legendre(int n);

/// Gauss-Lobatto rule with `n >= 2` points on [0, 1] (endpoints included),
/// exact to degree 2n-3. Nodes are exactly symmetric: x_i + x_{n-1-i} == 1.
Rule1D gauss_lobatto(int n);

/// Number of Gauss-Legendre points needed for exactness `degree`.
int gauss_points_for_degree(int degree);

/// Legendre polynomial P_n on [-1, 1].
double legendre(int n, double x);

/// Rule on the reference triangle (0,0),(1,0),(0,1) built from a collapsed
/// tensor Gauss rule.
QuadratureRule<2> reference_triangle_rule(int degree);
QuadratureRule<3> reference_tetrahedron_rule(int degree);

QuadratureRule<2> triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree);
QuadratureRule<3> tetrahedron_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                                   int degree);

/// Fan sub-triangulation from `center`. The polygon must be star-shaped with
/// respect to `center`; degenerate fan triangles contribute nothing.
QuadratureRule<2> polygon_rule(std::span<const Vec2> polygon, const Vec2& center, int degree);

/// Rule on a planar polygon embedded in 3D, fanned from `center`.
QuadratureRule<3> planar_polygon_rule(std::span<const Vec3> polygon, const Vec3& center,
                                      int degree);

/// Tetrahedral fan from `center` over each face, each face fanned from its
/// entry in `face_centers`.
QuadratureRule<3> polyhedron_rule(std::span<const Vec3> vertices,
                                  const std::vector<std::vector<int>>& faces,
                                  std::span<const Vec3> face_centers, const Vec3& center,
                                  int degree);

/// Rule on the segment [a, b] (length-weighted).
template <int Dim>
QuadratureRule<Dim> segment_rule(const Point<Dim>& a, const Point<Dim>& b, int degree) {
  const Rule1D r = gauss_legendre(gauss_points_for_degree(degree));
  const double len = (b - a).norm();
  QuadratureRule<Dim> q;
  q.degree = degree;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    q.points.push_back(a + r.points[i] * (b - a));
    q.weights.push_back(r.weights[i] * len);
  }
  return q;
}

}  // namespace vem
