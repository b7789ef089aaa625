#include "vem/mesh_io.hpp"
#include "vem/quality.hpp"
#include "vem/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace vem;

namespace {

int mesh_gen(int dim, int n, const std::string& family, const std::string& out) {
  if (dim == 2)
    write_mesh(out, generate_square_mesh(n, SquareFamily::parse(family)));
  else if (dim == 3)
    write_mesh(out, generate_cube_mesh(n, CubeFamily::parse(family)));
  else
    throw InvalidArgument("--dim must be 2 or 3");
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int mesh_check(const std::string& in) {
  const AnyMesh any = read_mesh(in);
  if (const auto* m = std::get_if<PolygonalMesh2>(&any)) {
    double area = 0.0;
    for (int c = 0; c < m->num_cells(); ++c) area += cell_geometry(*m, c).area;
    const MeshQualityReport q = quality_report(*m);
    std::printf("dim 2: %d vertices, %d edges, %d cells\n", m->num_vertices(), m->num_edges(), m->num_cells());
    std::printf("area %.15g\ntau_max %.6g\nalpha_h %.6g\nrho_min %.6g\n", area, q.tau_max, q.alpha_h, q.rho_min);
  } else {
    const auto& m3 = std::get<PolyhedralMesh3>(any);
    double volume = 0.0;
    for (int c = 0; c < m3.num_cells(); ++c) volume += cell_geometry(m3, c).volume;
    const MeshQualityReport q = quality_report(m3);
    std::printf("dim 3: %d vertices, %d edges, %d faces, %d cells\n", m3.num_vertices(), m3.num_edges(),
                m3.num_faces(), m3.num_cells());
    std::printf("volume %.15g\ntau_max %.6g\nface_tau_max %.6g\nbeta_h %.6g\nrho_min %.6g\n", volume, q.tau_max,
                q.face_tau_max, q.beta_h, q.rho_min);
  }
  std::printf("ok\n");
  return 0;
}

void print_report(const StudyReport& r) {
  std::printf("%-12s %8s", "h", "ndof");
  const char* names[] = {"energy", "h1_nabla", "h1_zero", "l2_zero", "l2_nabla", "linf_edge"};
  for (const char* n : names) std::printf(" %12s", n);
  std::printf(" %10s %8s\n", "tau_max", "solver");
  for (const auto& l : r.levels) {
    const ErrorNorms& e = l.errors;
    std::printf("%-12.4e %8d %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e %10.3g %8s\n", l.h, l.ndof, e.energy,
                e.h1_nabla, e.h1_zero, e.l2_zero, e.l2_nabla, e.linf_edge, l.tau_max, l.solver.c_str());
  }
  const ErrorNorms& s = r.slopes;
  std::printf("%-21s %12.3f %12.3f %12.3f %12.3f %12.3f %12.3f\n", "slopes", s.energy, s.h1_nabla, s.h1_zero,
              s.l2_zero, s.l2_nabla, s.linf_edge);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element solver for the Poisson problem on polygonal and polyhedral meshes"};
  app.require_subcommand(1);

  auto* mesh = app.add_subcommand("mesh", "Generate or check meshes");
  mesh->require_subcommand(1);
  int gen_dim = 2, gen_n = 4;
  std::string gen_family = "uniform", gen_out;
  auto* gen = mesh->add_subcommand("gen", "Write a unit square or cube mesh as JSON");
  gen->add_option("--dim", gen_dim, "2 or 3")->capture_default_str();
  gen->add_option("--n", gen_n, "Cells per side")->capture_default_str();
  gen->add_option("--family", gen_family, "uniform, smalledge:EPS, smalledge:h2, hanging, distorted:SEED (2D); "
                                          "uniform, facesplit:EPS (3D)")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output file")->required();
  std::string check_in;
  auto* check = mesh->add_subcommand("check", "Validate a mesh file and print quality statistics");
  check->add_option("--in", check_in, "Mesh file")->required()->check(CLI::ExistingFile);

  auto* study = app.add_subcommand("study", "Convergence studies");
  study->require_subcommand(1);
  auto* run = study->add_subcommand("run", "Solve a manufactured problem on a sequence of meshes");
  int dim = 2, k = 1;
  std::string stab, family = "uniform", levels = "4,8,16,32", case_name = "sine", out = "study_out", config;
  bool assert_rates = false;
  run->add_option("--config", config, "JSON file with the same keys as the flags")->check(CLI::ExistingFile);
  run->add_option("--dim", dim, "2 or 3")->capture_default_str();
  run->add_option("--k", k, "Polynomial order")->capture_default_str();
  run->add_option("--stab", stab, "s1, s2, s2tilde (2D) or 3d (default: s2 in 2D, 3d in 3D)");
  run->add_option("--family", family, "Mesh family")->capture_default_str();
  run->add_option("--levels", levels, "Comma-separated cells per side")->capture_default_str();
  run->add_option("--case", case_name, "sine, corner or poly[:SEED]")->capture_default_str();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_flag("--assert-rates", assert_rates, "Exit with status 1 unless the observed rates meet the thresholds");

  auto* sys = app.add_subcommand("system", "Linear system utilities");
  sys->require_subcommand(1);
  auto* dump = sys->add_subcommand("dump", "Write the assembled matrix in Matrix Market format");
  int dump_dim = 2, dump_k = 1, dump_n = 4;
  std::string dump_stab, dump_family = "uniform", dump_out;
  dump->add_option("--dim", dump_dim, "2 or 3")->capture_default_str();
  dump->add_option("--k", dump_k, "Polynomial order")->capture_default_str();
  dump->add_option("--n", dump_n, "Cells per side")->capture_default_str();
  dump->add_option("--stab", dump_stab, "Stabilization");
  dump->add_option("--family", dump_family, "Mesh family")->capture_default_str();
  dump->add_option("--out", dump_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return mesh_gen(gen_dim, gen_n, gen_family, gen_out);
    if (check->parsed()) return mesh_check(check_in);

    if (run->parsed()) {
      StudyConfig cfg;
      if (!config.empty()) {
        std::ifstream in(config);
        std::stringstream text;
        text << in.rdbuf();
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text.str());
        } catch (const nlohmann::json::exception& e) {
          throw InvalidArgument(config + ": " + e.what());
        }
        cfg = study_config_from_json(j);
        if (j.contains("out") && !run->count("--out")) out = j["out"].get<std::string>();
        if (j.contains("assert_rates") && !run->count("--assert-rates")) assert_rates = j["assert_rates"].get<bool>();
      }
      if (config.empty() || run->count("--dim")) {
        cfg.dim = dim;
        if (dim == 3) cfg.stab = Stabilization::Face3D;
      }
      if (config.empty() || run->count("--k")) cfg.k = k;
      if (!stab.empty()) cfg.stab = parse_stabilization(stab);
      if (config.empty() || run->count("--family")) cfg.family = family;
      if (config.empty() || run->count("--levels")) cfg.levels = parse_levels(levels);
      if (config.empty() || run->count("--case")) cfg.case_name = case_name;

      const StudyReport r = run_study(cfg);
      write_report(r, out);
      print_report(r);
      std::printf("wrote %s/report.csv, report.json, rates.dat\n", out.c_str());
      if (assert_rates) {
        if (!r.rate_case && !r.patch) std::printf("note: case '%s' is excluded from rate assertions\n", cfg.case_name.c_str());
        const auto failures = check_rates(r);
        for (const auto& f : failures) std::printf("FAIL %s\n", f.c_str());
        if (!failures.empty()) return 1;
        std::printf("rates ok\n");
      }
      return 0;
    }

    if (dump->parsed()) {
      const Stabilization s =
          dump_stab.empty() ? (dump_dim == 3 ? Stabilization::Face3D : Stabilization::S2) : parse_stabilization(dump_stab);
      GlobalSystem g;
      if (dump_dim == 2) {
        const auto m = generate_square_mesh(dump_n, SquareFamily::parse(dump_family));
        g = Discretization2(m, dump_k, s).assemble([](const Vec2&) { return 1.0; });
      } else if (dump_dim == 3) {
        const auto m = generate_cube_mesh(dump_n, CubeFamily::parse(dump_family));
        g = Discretization3(m, dump_k, s).assemble([](const Vec3&) { return 1.0; });
      } else {
        throw InvalidArgument("--dim must be 2 or 3");
      }
      write_matrix_market(dump_out, g.A);
      std::printf("wrote %s (%ld x %ld, %ld stored entries)\n", dump_out.c_str(), static_cast<long>(g.A.rows()),
                  static_cast<long>(g.A.cols()), static_cast<long>(g.A.nonZeros()));
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
