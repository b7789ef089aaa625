#include "test_support.hpp"
#include "vem/study.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace vem;

namespace {

Case2 zero_case() {
  Case2 c;
  c.name = "zero";
  c.u = [](const Vec2&) { return 0.0; };
  c.grad = [](const Vec2&) { return Vec2(0.0, 0.0); };
  c.f = [](const Vec2&) { return 0.0; };
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("manufactured cases satisfy the PDE") {
  CHECK(finite_difference_residual(make_case<2>("sine", 1)) < 1e-8);
  CHECK(finite_difference_residual(make_case<3>("sine", 1)) < 1e-8);
  CHECK(finite_difference_residual(make_case<2>("corner", 1)) < 1e-8);
  for (int k = 1; k <= 4; ++k) {
    CHECK(finite_difference_residual(make_case<2>("poly:7", k)) < 1e-8);
    CHECK(finite_difference_residual(make_case<3>("poly", k)) < 1e-8);
  }
  // A wrong forcing is caught.
  Case2 bad = make_case<2>("sine", 1);
  bad.f = [u = bad.u](const Vec2& x) { return 1.01 * 2.0 * std::numbers::pi * std::numbers::pi * u(x); };
  CHECK(finite_difference_residual(bad) > 1e-3);
}

TEST_CASE("case properties") {
  const Case2 s = make_case<2>("sine", 2);
  const Case2 c = make_case<2>("corner", 2);
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    for (const Vec2& x : {Vec2(t, 0.0), Vec2(t, 1.0), Vec2(0.0, t), Vec2(1.0, t)}) {
      CHECK(std::abs(s.u(x)) < 1e-15);
      CHECK(std::abs(c.u(x)) < 1e-15);
    }
  }
  CHECK(s.rate_case);
  CHECK_FALSE(c.rate_case);
  CHECK(c.smoothness < 2.0);
  CHECK_FALSE(make_case<2>("poly", 3).homogeneous);
  CHECK(make_case<3>("sine", 1).u(Vec3(0.5, 0.5, 0.5)) == doctest::Approx(1.0));
  // Same seed, same polynomial.
  CHECK(make_case<2>("poly:3", 2).u(Vec2(0.3, 0.4)) == make_case<2>("poly:3", 2).u(Vec2(0.3, 0.4)));
  CHECK(make_case<2>("poly:3", 2).u(Vec2(0.3, 0.4)) != make_case<2>("poly:4", 2).u(Vec2(0.3, 0.4)));
  CHECK_THROWS_AS(make_case<2>("nope", 1), InvalidArgument);
  CHECK_THROWS_AS(make_case<3>("corner", 1), InvalidArgument);
  CHECK_THROWS_AS(make_case<2>("poly:x", 1), InvalidArgument);
}

TEST_CASE("norms vanish on polynomial interpolants") {
  for (const char* fam : {"uniform", "smalledge:1e-3", "hanging"})
    for (int k = 1; k <= 4; ++k) {
      const auto mesh = generate_square_mesh(4, SquareFamily::parse(fam));
      const Discretization2 d(mesh, k, Stabilization::S2);
      const Case2 c = make_case<2>("poly:11", k);
      const Eigen::VectorXd uh = d.interpolate(c.u);
      const ErrorNorms e = error_norms(d, uh, c);
      CHECK(e.energy < 1e-9);
      CHECK(e.h1_nabla < 1e-9);
      CHECK(e.h1_zero < 1e-9);
      CHECK(e.l2_zero < 1e-9);
      CHECK(e.l2_nabla < 1e-9);
      CHECK(e.linf_edge < 1e-9);
    }
  const auto mesh = generate_cube_mesh(2, CubeFamily::parse("facesplit:0.1"));
  for (int k = 1; k <= 2; ++k) {
    const Discretization3 d(mesh, k, Stabilization::Face3D);
    const Case3 c = make_case<3>("poly", k);
    const ErrorNorms e = error_norms(d, d.interpolate(c.u), c);
    CHECK(std::max({e.energy, e.h1_nabla, e.h1_zero, e.l2_zero, e.l2_nabla, e.linf_edge}) < 1e-9);
  }
}

TEST_CASE("norms of trivial and sampled quantities") {
  const auto mesh = generate_square_mesh(4, SquareFamily::parse("uniform"));
  const Discretization2 d(mesh, 2, Stabilization::S1);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.dofs().size());
  const ErrorNorms e = error_norms(d, zero, zero_case());
  CHECK(std::max({e.energy, e.h1_nabla, e.h1_zero, e.l2_zero, e.l2_nabla, e.linf_edge}) == 0.0);

  // u_h = 0: the edge error is max |u| on the skeleton, attained at the vertex (1/2, 1/2).
  const Case2 s = make_case<2>("sine", 2);
  CHECK(error_linf_edges(d, zero, s) == doctest::Approx(1.0).epsilon(1e-15));
  // u_h = 0: L2 errors are ||u||, H1 errors are |u|_1.
  CHECK(error_l2_projected(d, zero, s).zero == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(error_h1_projected(d, zero, s).nabla == doctest::Approx(std::numbers::pi / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("norm evaluation is converged in its sampling") {
  const auto mesh = generate_square_mesh(8, SquareFamily::parse("smalledge:0.1"));
  const Case2 s = make_case<2>("sine", 2);
  for (int k = 1; k <= 3; ++k) {
    const Discretization2 d(mesh, k, Stabilization::S2);
    const Eigen::VectorXd uh = d.expand(solve(d.assemble(s.f)).x);
    const ProjectedErrors h1 = error_h1_projected(d, uh, s);
    const ProjectedErrors h1r = error_h1_projected(d, uh, s, 2 * (2 * k + 6));
    const ProjectedErrors l2 = error_l2_projected(d, uh, s);
    const ProjectedErrors l2r = error_l2_projected(d, uh, s, 2 * (2 * k + 6));
    CHECK(h1.nabla == doctest::Approx(h1r.nabla).epsilon(1e-8));
    CHECK(h1.zero == doctest::Approx(h1r.zero).epsilon(1e-8));
    CHECK(l2.nabla == doctest::Approx(l2r.nabla).epsilon(1e-8));
    CHECK(l2.zero == doctest::Approx(l2r.zero).epsilon(1e-8));
    const double linf = error_linf_edges(d, uh, s);
    const double linf4 = error_linf_edges(d, uh, s, 4 * (4 * k + 1));
    CHECK(std::abs(linf4 - linf) < 0.01 * linf4);
  }
}

TEST_CASE("energy error matches the assembled quadratic form") {
  const auto mesh = generate_square_mesh(4, SquareFamily::parse("hanging"));
  const Discretization2 d(mesh, 3, Stabilization::S2);
  const Case2 s = make_case<2>("sine", 3);
  CHECK(energy_norm_error(d, d.interpolate(s.u), s).norm == 0.0);
  const Eigen::VectorXd uh = d.expand(solve(d.assemble(s.f)).x);
  const EnergyError e = energy_norm_error(d, uh, s);
  const Eigen::VectorXd diff = d.interpolate(s.u) - uh;
  const double form = diff.dot(d.assemble_full() * diff);
  CHECK(e.energy == doctest::Approx(form).epsilon(1e-12));
  CHECK(e.norm * e.norm == doctest::Approx(e.energy).epsilon(1e-14));
}

TEST_CASE("slope fitting") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 2.5));
  CHECK(fit_slope(h, e, 3) == doctest::Approx(2.5).epsilon(1e-12));
  e[0] = 1.0;  // outside the last three levels
  CHECK(fit_slope(h, e, 3) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit_slope(h, e, 4) != doctest::Approx(2.5));
  e[3] = 0.0;
  CHECK(std::isnan(fit_slope(h, e, 3)));
  CHECK(std::isnan(fit_slope({0.5}, {1.0}, 3)));
}

TEST_CASE("study: k = 1 on uniform meshes") {
  StudyConfig cfg;
  cfg.k = 1;
  cfg.stab = Stabilization::S2;
  const StudyReport r = run_study(cfg);
  REQUIRE(r.levels.size() == 4);
  CHECK(r.slopes.l2_zero >= 1.85);
  CHECK(r.slopes.l2_zero <= 2.3);
  CHECK(check_rates(r).empty());
  for (std::size_t i = 1; i < r.levels.size(); ++i) {
    CHECK(r.levels[i].errors.energy < r.levels[i - 1].errors.energy);
    CHECK(r.levels[i].errors.h1_nabla < r.levels[i - 1].errors.h1_nabla);
    CHECK(r.levels[i].errors.l2_zero < r.levels[i - 1].errors.l2_zero);
    CHECK(r.levels[i].errors.linf_edge < r.levels[i - 1].errors.linf_edge);
  }
  CHECK(r.levels[0].ndof == 9);
  CHECK(r.levels[0].solver == "cholesky");
}

TEST_CASE("study: k = 2, S2, tiny edges") {
  StudyConfig cfg;
  cfg.k = 2;
  cfg.family = "smalledge:1e-4";
  const StudyReport r = run_study(cfg);
  CHECK(r.slopes.h1_nabla >= 1.85);
  CHECK(r.slopes.h1_nabla <= 2.3);
  // The interpolant-based energy error is superclose: order k to k + 1.
  CHECK(r.slopes.energy >= 1.85);
  CHECK(r.slopes.energy <= 3.3);
  CHECK(r.levels.back().tau_max > 1e3);
}

TEST_CASE("study: patch mode") {
  for (int k = 1; k <= 4; ++k) {
    StudyConfig cfg;
    cfg.k = k;
    cfg.family = "hanging";
    cfg.case_name = "poly:2";
    cfg.levels = {2, 4};
    const StudyReport r = run_study(cfg);
    CHECK(r.patch);
    CHECK(check_rates(r).empty());
  }
}

TEST_CASE("study: failed thresholds are reported") {
  StudyConfig cfg;
  cfg.k = 2;
  cfg.case_name = "sine";
  cfg.levels = {4, 8, 16};
  StudyReport r = run_study(cfg);
  r.slopes.l2_zero = 1.0;
  const auto f = check_rates(r);
  REQUIRE(f.size() == 1);
  CHECK(f[0].find("l2_zero") != std::string::npos);
  // Non-rate cases are never asserted.
  r.rate_case = false;
  CHECK(check_rates(r).empty());
}

TEST_CASE("study: 3D") {
  StudyConfig cfg;
  cfg.dim = 3;
  cfg.k = 2;
  cfg.stab = Stabilization::Face3D;
  cfg.levels = {2, 4, 8};
  const StudyReport r = run_study(cfg);
  CHECK(check_rates(r).empty());
  CHECK(r.levels[0].ndof == 27);
}

TEST_CASE("study: reports are reproducible") {
  StudyConfig cfg;
  cfg.k = 2;
  cfg.family = "distorted:3";
  cfg.levels = {2, 4, 8};
  const auto dir = std::filesystem::temp_directory_path() / "vem_study_test";
  write_report(run_study(cfg), dir / "a");
  write_report(run_study(cfg), dir / "b");
  const std::string csv = slurp(dir / "a" / "report.csv");
  CHECK(csv == slurp(dir / "b" / "report.csv"));
  CHECK(csv.starts_with("h,ndof,energy,h1_nabla,h1_zero,l2_zero,l2_nabla,linf_edge,tau_max,alpha_h\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const auto j = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  CHECK(j["levels"].size() == 3);
  CHECK(j["slopes"]["energy"].is_number());
  CHECK(std::filesystem::exists(dir / "a" / "rates.dat"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("study configuration") {
  const auto j = nlohmann::json::parse(R"({"dim": 3, "k": 2, "family": "facesplit:0.05", "levels": "2,4", "case": "sine"})");
  const StudyConfig c = study_config_from_json(j);
  CHECK(c.dim == 3);
  CHECK(c.stab == Stabilization::Face3D);
  CHECK(c.levels == std::vector<int>{2, 4});
  CHECK(study_config_from_json(nlohmann::json::parse(R"({"levels": [3, 5]})")).levels == std::vector<int>{3, 5});
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"k": "two"})")), InvalidArgument);
  CHECK_THROWS_AS(parse_levels("4,,8"), InvalidArgument);
  CHECK_THROWS_AS(parse_levels("4,-8"), InvalidArgument);

  StudyConfig bad;
  bad.k = 5;
  CHECK_THROWS_AS(run_study(bad), InvalidArgument);
  bad.k = 1;
  bad.stab = Stabilization::Face3D;
  CHECK_THROWS_AS(run_study(bad), InvalidArgument);
  bad.dim = 3;
  bad.k = 3;
  CHECK_THROWS_AS(run_study(bad), InvalidArgument);
}
