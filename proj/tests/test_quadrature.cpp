#include "test_support.hpp"
#include "vem/geometry.hpp"
#include "vem/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace vem;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("gauss-legendre exactness") {
  for (int n = 1; n <= 8; ++n) {
    const Rule1D r = gauss_legendre(n);
    for (int j = 0; j <= 2 * n - 1; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * std::pow(r.points[i], j);
      CHECK(s == doctest::Approx(1.0 / (j + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauss-lobatto nodes are symmetric and exact") {
  for (int n = 2; n <= 8; ++n) {
    const Rule1D r = gauss_lobatto(n);
    CHECK(r.points.front() == 0.0);
    CHECK(r.points.back() == 1.0);
    for (int i = 0; i < n; ++i) CHECK(r.points[i] + r.points[n - 1 - i] == 1.0);
    for (int j = 0; j <= 2 * n - 3; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.points[i], j);
      CHECK(s == doctest::Approx(1.0 / (j + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("reference simplex rules integrate monomials exactly") {
  for (int d = 0; d <= 10; ++d) {
    const auto tri = reference_triangle_rule(d);
    const auto tet = reference_tetrahedron_rule(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < tri.size(); ++q)
          s += tri.weights[q] * std::pow(tri.points[q].x(), a) * std::pow(tri.points[q].y(), b);
        CHECK(s == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2)).epsilon(1e-13));
        for (int c = 0; a + b + c <= d; ++c) {
          double t = 0.0;
          for (std::size_t q = 0; q < tet.size(); ++q)
            t += tet.weights[q] * std::pow(tet.points[q].x(), a) * std::pow(tet.points[q].y(), b) *
                 std::pow(tet.points[q].z(), c);
          CHECK(t == doctest::Approx(factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3))
                         .epsilon(1e-13));
        }
      }
  }
}

TEST_CASE("polygon fan rule matches the divergence theorem") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int nv = 3 + trial % 6;
    const auto poly = test::random_star_polygon(rng, nv, trial % 3 == 0 ? 1e-6 : 0.0);
    const CellGeometry2 g = polygon_geometry(poly);
    const int degree = 8;
    const auto rule = polygon_rule(poly, g.star_center, degree);
    CHECK(rule.measure() == doctest::Approx(g.area).epsilon(1e-13));
    const double h = g.diameter;
    for (int p = 0; p <= degree; ++p)
      for (int q = 0; p + q <= degree; ++q) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const Vec2 y = (rule.points[i] - g.centroid) / h;
          s += rule.weights[i] * std::pow(y.x(), p) * std::pow(y.y(), q);
        }
        const double exact = test::polygon_monomial_integral(poly, g.centroid, p, q) / std::pow(h, p + q);
        // Relative to the area scale: odd moments can vanish.
        CHECK(std::abs(s - exact) <= 1e-12 * g.area);
      }
  }
}

TEST_CASE("non-convex polygon uses a kernel point") {
  const std::vector<Vec2> L{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const CellGeometry2 g = polygon_geometry(L);
  const auto rule = polygon_rule(L, g.star_center, 4);
  CHECK(rule.measure() == doctest::Approx(3.0).epsilon(1e-14));
  double sx = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sx += rule.weights[i] * rule.points[i].x() * rule.points[i].x();
  CHECK(sx == doctest::Approx(test::polygon_monomial_integral(L, Vec2::Zero(), 2, 0)).epsilon(1e-13));
}

TEST_CASE("polyhedron rule on cube and facesplit cells") {
  for (const char* fam : {"uniform", "facesplit:0.05"}) {
    const auto mesh = generate_cube_mesh(2, CubeFamily::parse(fam));
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const CellGeometry3 g = cell_geometry(mesh, c);
      std::vector<std::vector<int>> faces;
      std::vector<Vec3> centers;
      for (const FaceRef& fr : mesh.cell(c)) {
        faces.push_back(mesh.face(fr.face));
        centers.push_back(face_geometry(mesh, fr.face).centroid());
      }
      const int degree = 6;
      const auto rule = polyhedron_rule(mesh.vertices(), faces, centers, g.star_center, degree);
      CHECK(rule.measure() == doctest::Approx(g.volume).epsilon(1e-13));
      total += rule.measure();
      for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
          for (int e = 0; a + b + e <= degree; ++e) {
            double s = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i) {
              const Vec3 y = rule.points[i] - g.centroid;
              s += rule.weights[i] * std::pow(y.x(), a) * std::pow(y.y(), b) * std::pow(y.z(), e);
            }
            const double exact = test::polyhedron_monomial_integral(mesh, c, g.centroid, a, b, e);
            CHECK(std::abs(s - exact) <= 1e-12 * g.volume * std::pow(g.diameter, a + b + e));
          }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("segment rule") {
  const auto r = segment_rule<2>(Vec2(0, 0), Vec2(3, 4), 5);
  CHECK(r.measure() == doctest::Approx(5.0).epsilon(1e-15));
}
