#include "vem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace vem {

namespace {

// P_n and P_n' on [-1, 1] via the three-term recurrence.
void legendre_with_derivative(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

int gauss_points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

Rule1D gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one point");
  Rule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre_with_derivative(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_with_derivative(n, x, p, dp);
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) halved for [0,1]
    r.points[i] = 0.5 * (1.0 - x);
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.points[n / 2] = 0.5;
  return r;
}

Rule1D gauss_lobatto(int n) {
  if (n < 2) throw InvalidArgument("gauss_lobatto: need at least two points");
  const int N = n - 1;
  Rule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = -std::cos(std::numbers::pi * i / N);
    if (i > 0) {
      // Newton on (1 - x^2) P_N'(x).
      for (int it = 0; it < 100; ++it) {
        double p = 0.0;
        double dp = 0.0;
        legendre_with_derivative(N, x, p, dp);
        // d/dx[(1-x^2)P_N'] = -N(N+1) P_N
        const double f = (1.0 - x * x) * dp;
        const double df = -N * (N + 1.0) * p;
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
    }
    const double pn = legendre(N, x);
    const double w = 1.0 / (N * (N + 1.0) * pn * pn);
    r.points[i] = 0.5 * (1.0 + x);
    r.points[n - 1 - i] = 1.0 - r.points[i];
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.points[n / 2] = 0.5;
  return r;
}

QuadratureRule<2> reference_triangle_rule(int degree) {
  const int m = std::max(1, (degree + 3) / 2);
  const Rule1D g = gauss_legendre(m);
  QuadratureRule<2> q;
  q.degree = degree;
  for (int i = 0; i < m; ++i) {
    const double u = g.points[i];
    for (int j = 0; j < m; ++j) {
      const double v = g.points[j];
      q.points.emplace_back(u, v * (1.0 - u));
      q.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return q;
}

QuadratureRule<3> reference_tetrahedron_rule(int degree) {
  const int m = std::max(1, (degree + 4) / 2);
  const Rule1D g = gauss_legendre(m);
  QuadratureRule<3> q;
  q.degree = degree;
  for (int i = 0; i < m; ++i) {
    const double u = g.points[i];
    for (int j = 0; j < m; ++j) {
      const double v = g.points[j];
      for (int l = 0; l < m; ++l) {
        const double w = g.points[l];
        q.points.emplace_back(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v));
        q.weights.push_back(g.weights[i] * g.weights[j] * g.weights[l] * (1.0 - u) * (1.0 - u) *
                            (1.0 - v));
      }
    }
  }
  return q;
}

QuadratureRule<2> triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree) {
  const QuadratureRule<2> ref = reference_triangle_rule(degree);
  Eigen::Matrix2d J;
  J.col(0) = b - a;
  J.col(1) = c - a;
  const double det = std::abs(J.determinant());
  QuadratureRule<2> q;
  q.degree = degree;
  q.points.reserve(ref.size());
  q.weights.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    q.points.push_back(a + J * ref.points[i]);
    q.weights.push_back(ref.weights[i] * det);
  }
  return q;
}

QuadratureRule<3> tetrahedron_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                                   int degree) {
  const QuadratureRule<3> ref = reference_tetrahedron_rule(degree);
  Eigen::Matrix3d J;
  J.col(0) = b - a;
  J.col(1) = c - a;
  J.col(2) = d - a;
  const double det = std::abs(J.determinant());
  QuadratureRule<3> q;
  q.degree = degree;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    q.points.push_back(a + J * ref.points[i]);
    q.weights.push_back(ref.weights[i] * det);
  }
  return q;
}

namespace {

template <int Dim>
void append(QuadratureRule<Dim>& dst, const QuadratureRule<Dim>& src) {
  dst.points.insert(dst.points.end(), src.points.begin(), src.points.end());
  dst.weights.insert(dst.weights.end(), src.weights.begin(), src.weights.end());
}

}  // namespace

QuadratureRule<2> polygon_rule(std::span<const Vec2> polygon, const Vec2& center, int degree) {
  QuadratureRule<2> q;
  q.degree = degree;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const double twice_area = (a - center).x() * (b - center).y() - (a - center).y() * (b - center).x();
    if (twice_area == 0.0) continue;
    append(q, triangle_rule(center, a, b, degree));
  }
  return q;
}

QuadratureRule<3> planar_polygon_rule(std::span<const Vec3> polygon, const Vec3& center,
                                      int degree) {
  const QuadratureRule<2> ref = reference_triangle_rule(degree);
  QuadratureRule<3> q;
  q.degree = degree;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 e1 = polygon[i] - center;
    const Vec3 e2 = polygon[(i + 1) % n] - center;
    const double area2 = e1.cross(e2).norm();
    if (area2 == 0.0) continue;
    for (std::size_t j = 0; j < ref.size(); ++j) {
      q.points.push_back(center + ref.points[j].x() * e1 + ref.points[j].y() * e2);
      q.weights.push_back(ref.weights[j] * area2);
    }
  }
  return q;
}

QuadratureRule<3> polyhedron_rule(std::span<const Vec3> vertices,
                                  const std::vector<std::vector<int>>& faces,
                                  std::span<const Vec3> face_centers, const Vec3& center,
                                  int degree) {
  const QuadratureRule<3> ref = reference_tetrahedron_rule(degree);
  QuadratureRule<3> q;
  q.degree = degree;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& loop = faces[f];
    const Vec3& fc = face_centers[f];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = vertices[loop[i]];
      const Vec3& b = vertices[loop[(i + 1) % loop.size()]];
      Eigen::Matrix3d J;
      J.col(0) = fc - center;
      J.col(1) = a - center;
      J.col(2) = b - center;
      const double det = std::abs(J.determinant());
      if (det == 0.0) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        q.points.push_back(center + J * ref.points[j]);
        q.weights.push_back(ref.weights[j] * det);
      }
    }
  }
  return q;
}

}  // namespace vem
