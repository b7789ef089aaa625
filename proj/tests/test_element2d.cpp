#include "test_support.hpp"
#include "vem/element2d.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace vem;

namespace {

const std::vector<Vec2> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const std::vector<Vec2> kL{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

ScalarField2 monomial(const Element2& el, int beta) {
  return [&el, beta](const Vec2& x) { return el.basis().values(x)[beta]; };
}

std::vector<Vec2> pentagon(double eps) {
  return {{0, 0}, {1, 0}, {1, eps}, {1, 1}, {0, 1}};
}

}  // namespace

TEST_CASE("dof layout counts") {
  for (int k = 1; k <= 4; ++k)
    for (int nv = 3; nv <= 7; ++nv) {
      const DofLayout2 l(nv, k);
      CHECK(l.size() == nv * k + k * (k - 1) / 2);
      const auto ids = l.edge_nodes(nv - 1);
      CHECK(ids.front() == nv - 1);
      CHECK(ids.back() == 0);
    }
}

TEST_CASE("energy projector reproduces polynomials") {
  std::mt19937_64 rng(19);
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::vector<Vec2>> cells{kSquare, kL, pentagon(1e-6)};
    for (int t = 0; t < 5; ++t) cells.push_back(test::random_star_polygon(rng, 3 + t, t % 2 ? 1e-6 : 0.0));
    for (const auto& poly : cells) {
      const Element2 el(poly, k);
      const int nk = el.basis().size();
      for (int b = 0; b < nk; ++b) {
        const Eigen::VectorXd dofs = el.interpolate(monomial(el, b));
        CHECK(max_abs(dofs - el.monomial_dofs().col(b)) < 1e-12);
        const Eigen::VectorXd c = el.projector_nabla() * el.monomial_dofs().col(b);
        CHECK(max_abs(c - Eigen::VectorXd::Unit(nk, b)) < 1e-10);
        const Eigen::VectorXd c0 = el.projector_zero() * el.monomial_dofs().col(b);
        CHECK(max_abs(c0 - Eigen::VectorXd::Unit(nk, b)) < 1e-10);
      }
      const Eigen::MatrixXd P = el.projector_nabla_dofs();
      CHECK(max_abs(P * P - P) < 1e-12 * std::max(1.0, max_abs(P)));
    }
  }
}

TEST_CASE("constant dofs project to the constant") {
  const Element2 el(kL, 3);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(el.layout().size());
  v.head(el.layout().num_boundary()).setOnes();
  v[el.layout().moment_dof(0)] = 1.0;
  const Eigen::VectorXd c = el.projector_nabla() * v;
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.tail(c.size() - 1).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("on a triangle with k = 1 the projector is the identity") {
  const Element2 el({{0.1, 0.2}, {1.3, 0.0}, {0.4, 0.9}}, 1);
  CHECK(max_abs(el.projector_nabla_dofs() - Eigen::MatrixXd::Identity(3, 3)) < 1e-13);
  // Least-squares oracle: the linear through the three vertex values.
  Eigen::Matrix3d V;
  for (int i = 0; i < 3; ++i) V.row(i) = el.basis().values(el.polygon()[i]).transpose();
  CHECK(max_abs(V.inverse() - el.projector_nabla()) < 1e-12);
}

TEST_CASE("L2 projector structure") {
  std::mt19937_64 rng(23);
  for (int k = 1; k <= 4; ++k) {
    const Element2 el(test::random_star_polygon(rng, 6, 1e-3), k);
    const int s = el.layout().num_moments();
    const Eigen::MatrixXd diff = el.projector_zero() - el.projector_nabla();
    if (k == 1) CHECK(max_abs(diff) == 0.0);
    // Pi^0 - Pi^nabla lies in P_{k-2}.
    CHECK(max_abs(diff.bottomRows(diff.rows() - s)) == 0.0);
    // Its low moments are the stored moment dofs.
    const Eigen::MatrixXd m = el.mass().topRows(s) * el.projector_zero();
    for (int a = 0; a < s; ++a) {
      Eigen::RowVectorXd expected = Eigen::RowVectorXd::Zero(el.layout().size());
      expected[el.layout().moment_dof(a)] = el.geometry().area;
      CHECK(max_abs(m.row(a) - expected) < 1e-12 * el.geometry().area);
    }
  }
}

TEST_CASE("square k = 2: L2 projector moments against 1, x, y by independent quadrature") {
  const Element2 el(kSquare, 2);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd v(el.layout().size());
  for (int i = 0; i < v.size(); ++i) v[i] = U(rng);
  const Eigen::VectorXd c0 = el.projector_zero() * v;
  const Eigen::VectorXd cn = el.projector_nabla() * v;
  const auto& ex = el.basis().exponents();
  const double h = el.geometry().diameter;
  auto moment = [&](const Eigen::VectorXd& c, int a) {
    double s = 0.0;
    for (int b = 0; b < c.size(); ++b)
      s += c[b] * test::polygon_monomial_integral(kSquare, el.geometry().centroid, ex[a][0] + ex[b][0],
                                                  ex[a][1] + ex[b][1]) /
           std::pow(h, ex[a][0] + ex[b][0] + ex[a][1] + ex[b][1]);
    return s;
  };
  CHECK(moment(c0, 0) == doctest::Approx(v[el.layout().moment_dof(0)]).epsilon(1e-12));
  CHECK(std::abs(moment(c0, 1) - moment(cn, 1)) < 1e-12);
  CHECK(std::abs(moment(c0, 2) - moment(cn, 2)) < 1e-12);
}

TEST_CASE("S1 stabilization") {
  for (int k = 1; k <= 3; ++k) {
    const Element2 el(kL, k);
    const Eigen::MatrixXd S = el.stabilization(Stabilization::S1);
    Eigen::VectorXd ones = Eigen::VectorXd::Zero(el.layout().size());
    ones.head(el.layout().num_boundary()).setOnes();
    CHECK(ones.dot(S * ones) == doctest::Approx(k * 6.0));
    for (int a = 0; a < el.layout().num_moments(); ++a) CHECK(S.col(el.layout().moment_dof(a)).norm() == 0.0);
  }
  const Element2 sq(kSquare, 1);
  CHECK(max_abs(sq.stabilization(Stabilization::S1) - Eigen::MatrixXd::Identity(4, 4)) == 0.0);
}

TEST_CASE("S2 stabilization") {
  const Element2 sq(kSquare, 1);
  const Eigen::MatrixXd S = sq.stabilization(Stabilization::S2);
  CHECK(S(0, 0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK((S * Eigen::VectorXd::Ones(4)).norm() < 1e-14);

  for (int k = 1; k <= 4; ++k) {
    const Element2 el(kL, k);
    for (auto s : {Stabilization::S2, Stabilization::S2Tilde}) {
      const Eigen::MatrixXd M = el.stabilization(s);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(el.layout().size());
      c.head(el.layout().num_boundary()).setOnes();
      CHECK((M * c).norm() < 1e-12 * max_abs(M));
      for (int a = 0; a < el.layout().num_moments(); ++a) CHECK(M.col(el.layout().moment_dof(a)).norm() == 0.0);
    }
  }
  // Equilateral triangle: every edge length equals the diameter.
  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  const Element2 et(tri, 3);
  CHECK(max_abs(et.stabilization(Stabilization::S2) - et.stabilization(Stabilization::S2Tilde)) < 1e-13);
  CHECK_THROWS_AS(et.stabilization(Stabilization::Face3D), InvalidArgument);
}

TEST_CASE("unit square k = 1 stiffness matches the dense oracle") {
  const auto fx = test::load_fixture("oracle_values.json");
  const Element2 el(kSquare, 1);
  CHECK(max_abs(el.local_stiffness(Stabilization::S1) - test::fixture_matrix(fx["square_k1_s1"])) < 1e-12);
  CHECK(max_abs(el.local_stiffness(Stabilization::S2) - test::fixture_matrix(fx["square_k1_s2"])) < 1e-12);
}

TEST_CASE("local stiffness: consistency and kernel") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 24; ++t) {
    const int k = 1 + t % 4;
    const auto stab = std::array{Stabilization::S1, Stabilization::S2, Stabilization::S2Tilde}[t % 3];
    const Element2 el(test::random_star_polygon(rng, 3 + t % 6, t % 4 == 0 ? 1e-6 : 0.0), k);
    const Eigen::MatrixXd K = el.local_stiffness(stab);
    CHECK(max_abs(K - K.transpose()) == 0.0);
    CHECK(kernel_dimension(K) == 1);
    const Eigen::MatrixXd D = el.monomial_dofs();
    CHECK((K * D.col(0)).norm() < 1e-10 * K.trace());
    // The stabilisation sees no polynomial residual, and the consistency part is exact.
    const Eigen::MatrixXd residual = D - el.projector_nabla_dofs() * D;
    CHECK(max_abs(residual) < 1e-10);
    const Eigen::MatrixXd PD = el.projector_nabla() * D;
    CHECK(max_abs(PD.transpose() * el.poly_stiffness() * PD - el.poly_stiffness()) < 1e-10);
    // Assembled form: exact up to rounding at the scale of K.
    const Eigen::MatrixXd pq = D.transpose() * K * D;
    CHECK(max_abs(pq - el.poly_stiffness()) < 1e-12 * std::max(1.0, max_abs(K)));
  }
}

TEST_CASE("S2 on shrinking small edges: consistency part stays dominated") {
  for (auto stab : {Stabilization::S1, Stabilization::S2}) {
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const Element2 el(pentagon(eps), 2);
      const Eigen::MatrixXd K = el.local_stiffness(stab);
      const Eigen::MatrixXd C = el.projector_nabla().transpose() * el.poly_stiffness() * el.projector_nabla();
      // Generalised eigenvalues of (C, K) on the complement of the constants.
      const int N = static_cast<int>(K.rows());
      Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(N, N - 1);
      Z.row(N - 1).setConstant(-1.0);
      Z = Z.householderQr().householderQ() * Eigen::MatrixXd::Identity(N, N - 1);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Z.transpose() * C * Z, Z.transpose() * K * Z);
      REQUIRE(ges.info() == Eigen::Success);
      const double lmax = ges.eigenvalues().maxCoeff();
      MESSAGE(to_string(stab) << " eps=" << eps << " max generalised eigenvalue " << lmax);
      CHECK(lmax <= 1.0 + 1e-8);
      CHECK(ges.eigenvalues().minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("load vector") {
  std::mt19937_64 rng(37);
  for (int k = 1; k <= 4; ++k) {
    const Element2 el(test::random_star_polygon(rng, 5), k);
    CHECK(el.local_load([](const Vec2&) { return 0.0; }).norm() == 0.0);
    const Eigen::MatrixXd xi = el.load_projector();
    const Eigen::VectorXd F = el.local_load([](const Vec2&) { return 1.0; });
    const Eigen::VectorXd expected = xi.transpose() * el.mass().row(0).head(xi.rows()).transpose();
    CHECK(max_abs(F - expected) < 1e-13 * el.geometry().area);
    // \int Xi phi_i computed with the independent divergence-theorem integrator.
    const double h = el.geometry().diameter;
    const auto& ex = el.basis().exponents();
    Eigen::VectorXd ints(xi.rows());
    for (int b = 0; b < xi.rows(); ++b)
      ints[b] = test::polygon_monomial_integral(el.polygon(), el.geometry().centroid, ex[b][0], ex[b][1]) /
                std::pow(h, ex[b][0] + ex[b][1]);
    CHECK(max_abs(F - xi.transpose() * ints) < 1e-12 * el.geometry().area);
    if (k >= 3) {
      const int s = el.layout().num_moments();
      auto f = [](const Vec2& x) { return std::exp(x.x()) * std::cos(x.y()); };
      Eigen::VectorXd g = Eigen::VectorXd::Zero(s);
      for (std::size_t q = 0; q < el.rule().size(); ++q)
        g += el.rule().weights[q] * f(el.rule().points[q]) * el.basis().values(el.rule().points[q]).head(s);
      const Eigen::VectorXd Fm = el.local_load(f).tail(s);
      const Eigen::VectorXd want = el.geometry().area * el.mass().topLeftCorner(s, s).llt().solve(g);
      CHECK(max_abs(Fm - want) < 1e-10 * std::max(1.0, max_abs(want)));
    } else {
      CHECK(xi.rows() == 3);
    }
  }
}

TEST_CASE("interpolation") {
  const Element2 el(kL, 3);
  CHECK(el.interpolate([](const Vec2&) { return 0.0; }).norm() == 0.0);
  for (int b = 0; b < el.basis().size(); ++b) {
    const Eigen::VectorXd v = el.interpolate(monomial(el, b));
    CHECK(max_abs(el.projector_nabla() * v - Eigen::VectorXd::Unit(el.basis().size(), b)) < 1e-10);
  }
}

TEST_CASE("interpolation error decays with the cell size") {
  const auto zeta = [](const Vec2& x) { return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y()); };
  const std::vector<Vec2> base{{0, 0}, {1, 0}, {1.2, 0.6}, {0.5, 1.1}, {-0.1, 0.7}};
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> logs_h, logs_e;
    for (int level = 0; level < 4; ++level) {
      const double s = std::pow(0.5, level + 1);
      std::vector<Vec2> poly;
      for (const auto& p : base) poly.push_back(Vec2(0.3, 0.2) + s * p);
      const Element2 el(poly, k);
      const Eigen::VectorXd c = el.projector_nabla() * el.interpolate(zeta);
      const auto rule = polygon_rule(poly, el.geometry().star_center, 2 * k + 6);
      double err = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double d = zeta(rule.points[q]) - el.basis().evaluate(c, rule.points[q]);
        err += rule.weights[q] * d * d;
      }
      logs_h.push_back(std::log(s));
      logs_e.push_back(0.5 * std::log(err));
    }
    const double slope = (logs_e.back() - logs_e[logs_e.size() - 2]) / (logs_h.back() - logs_h[logs_h.size() - 2]);
    CHECK(slope >= k + 1 - 0.2);
  }
}

TEST_CASE("triple-bar seminorm") {
  const Element2 el1(kSquare, 1);
  CHECK(el1.seminorm_tbar(Eigen::VectorXd::Zero(4)) == 0.0);
  CHECK(el1.seminorm_tbar(Eigen::VectorXd::Ones(4)) == doctest::Approx(std::sqrt(4.0 * std::sqrt(2.0))).epsilon(1e-14));
  const Element2 el2(kSquare, 2);
  const Eigen::VectorXd ones = el2.interpolate([](const Vec2&) { return 1.0; });
  CHECK(el2.seminorm_tbar(ones) == doctest::Approx(std::sqrt(1.0 + 4.0 * std::sqrt(2.0))).epsilon(1e-13));
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd v(el2.layout().size());
  for (int i = 0; i < v.size(); ++i) v[i] = U(rng);
  CHECK(el2.seminorm_tbar(2.0 * v) == doctest::Approx(2.0 * el2.seminorm_tbar(v)).epsilon(1e-14));
}

TEST_CASE("orthonormalised inversion gives the same projectors") {
  const std::vector<Vec2> thin{{0, 0}, {1, 0}, {1, 0.02}, {0, 0.02}};
  for (int k = 3; k <= 4; ++k) {
    const Element2 plain(thin, k);
    const Element2 ortho(thin, k, ElementOptions{.orthonormalize = true});
    CHECK(max_abs(plain.projector_zero() - ortho.projector_zero()) < 1e-8 * max_abs(plain.projector_zero()));
  }
}

TEST_CASE("invalid order") {
  CHECK_THROWS_AS(Element2(kSquare, 0), InvalidArgument);
}
