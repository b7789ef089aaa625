#include "vem/study.hpp"

#include "vem/quality.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace vem {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kColumns[] = {"energy", "h1_nabla", "h1_zero", "l2_zero", "l2_nabla", "linf_edge"};

std::array<double, 6> as_array(const ErrorNorms& e) {
  return {e.energy, e.h1_nabla, e.h1_zero, e.l2_zero, e.l2_nabla, e.linf_edge};
}

ErrorNorms from_array(const std::array<double, 6>& a) { return {a[0], a[1], a[2], a[3], a[4], a[5]}; }

template <int Dim>
LevelResult run_level(const StudyConfig& cfg, int n, const ManufacturedCase<Dim>& mc) {
  LevelResult r;
  r.n = n;
  auto body = [&](const auto& mesh) {
    const MeshQualityReport q = quality_report(mesh);
    r.tau_max = q.tau_max;
    r.alpha_h = Dim == 2 ? q.alpha_h : q.beta_h;
    const Discretization<Dim> disc(mesh, cfg.k, cfg.stab);
    for (const auto& el : disc.elements()) r.h = std::max(r.h, el.geometry().diameter);
    Eigen::VectorXd lifting;
    if (!mc.homogeneous) lifting = disc.interpolate(mc.u);
    const Eigen::VectorXd* lift = mc.homogeneous ? nullptr : &lifting;
    const GlobalSystem sys = disc.assemble(mc.f, lift);
    const SolveResult sol = solve(sys, cfg.solver);
    r.ndof = static_cast<int>(sys.b.size());
    r.solver = sol.solver;
    r.iterations = sol.iterations;
    r.residual = sol.residual;
    r.errors = error_norms(disc, disc.expand(sol.x, lift), mc);
  };
  if constexpr (Dim == 2)
    body(generate_square_mesh(n, SquareFamily::parse(cfg.family)));
  else
    body(generate_cube_mesh(n, CubeFamily::parse(cfg.family)));
  return r;
}

template <int Dim>
void run_levels(StudyReport& rep) {
  const StudyConfig& cfg = rep.config;
  const ManufacturedCase<Dim> mc = make_case<Dim>(cfg.case_name, cfg.k);
  rep.patch = !mc.homogeneous;
  rep.rate_case = mc.rate_case;
  for (int n : cfg.levels) {
    try {
      rep.levels.push_back(run_level<Dim>(cfg, n, mc));
    } catch (const NotConverged&) {
      throw;
    } catch (const Error& e) {
      throw Error("level n=" + std::to_string(n) + ": " + e.what());
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

}  // namespace

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1) throw InvalidArgument("bad level list '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty level list");
  return out;
}

StudyConfig study_config_from_json(const nlohmann::json& j) {
  StudyConfig c;
  try {
    if (j.contains("dim")) c.dim = j.at("dim").get<int>();
    if (c.dim == 3) c.stab = Stabilization::Face3D;
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("stab")) c.stab = parse_stabilization(j.at("stab").get<std::string>());
    if (j.contains("family")) c.family = j.at("family").get<std::string>();
    if (j.contains("case")) c.case_name = j.at("case").get<std::string>();
    if (j.contains("fit_levels")) c.fit_levels = j.at("fit_levels").get<int>();
    if (j.contains("levels")) {
      const auto& l = j.at("levels");
      c.levels = l.is_string() ? parse_levels(l.get<std::string>()) : l.get<std::vector<int>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("study config: ") + e.what());
  }
  return c;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& err, int last) {
  const int n = static_cast<int>(h.size());
  const int first = std::max(0, n - last);
  if (n - first < 2) return nan;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = n - first;
  for (int i = first; i < n; ++i) {
    if (!(err[i] > 0.0) || !(h[i] > 0.0)) return nan;
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : nan;
}

StudyReport run_study(const StudyConfig& config) {
  if (config.dim != 2 && config.dim != 3) throw InvalidArgument("dim must be 2 or 3");
  const int kmax = config.dim == 2 ? 4 : 2;
  if (config.k < 1 || config.k > kmax)
    throw InvalidArgument("k must be in [1, " + std::to_string(kmax) + "] in " + std::to_string(config.dim) + "D");
  if ((config.dim == 3) != (config.stab == Stabilization::Face3D))
    throw InvalidArgument("stabilization '" + std::string(to_string(config.stab)) + "' is not available in " +
                          std::to_string(config.dim) + "D");
  if (config.levels.empty()) throw InvalidArgument("no refinement levels");

  StudyReport rep;
  rep.config = config;
  if (config.dim == 2)
    run_levels<2>(rep);
  else
    run_levels<3>(rep);

  std::vector<double> hs;
  std::array<std::vector<double>, 6> cols;
  for (const auto& l : rep.levels) {
    hs.push_back(l.h);
    const auto a = as_array(l.errors);
    for (int i = 0; i < 6; ++i) cols[i].push_back(a[i]);
  }
  std::array<double, 6> s;
  const int last = std::max(3, config.fit_levels);
  for (int i = 0; i < 6; ++i) s[i] = fit_slope(hs, cols[i], last);
  rep.slopes = from_array(s);
  return rep;
}

std::vector<std::string> check_rates(const StudyReport& rep) {
  std::vector<std::string> failures;
  const int k = rep.config.k;
  if (rep.patch) {
    for (const auto& l : rep.levels) {
      const auto a = as_array(l.errors);
      for (int i = 0; i < 6; ++i)
        if (!(a[i] <= 1e-8))
          failures.push_back("n=" + std::to_string(l.n) + ": " + kColumns[i] + " = " + fmt(a[i]) + " > 1e-8");
    }
    return failures;
  }
  if (!rep.rate_case) return failures;
  if (rep.levels.size() < 3) {
    failures.push_back("rate assertions need at least 3 levels");
    return failures;
  }
  const bool two = rep.config.dim == 2;
  const double h1 = k - (two ? 0.15 : 0.25);
  const double l2 = k + 1 - (two ? 0.2 : 0.3);
  const std::array<double, 6> need{h1, h1, h1, l2, l2, two ? k - 0.2 : nan};
  const auto got = as_array(rep.slopes);
  for (int i = 0; i < 6; ++i) {
    if (std::isnan(need[i])) continue;
    if (!(got[i] >= need[i]))
      failures.push_back(std::string(kColumns[i]) + " slope " + fmt(got[i]) + " < " + fmt(need[i]));
  }
  return failures;
}

std::string report_csv(const StudyReport& rep) {
  std::string out = "h,ndof";
  for (const char* c : kColumns) out += std::string(",") + c;
  out += ",tau_max,alpha_h\n";
  for (const auto& l : rep.levels) {
    out += fmt(l.h) + "," + std::to_string(l.ndof);
    for (double v : as_array(l.errors)) out += "," + fmt(v);
    out += "," + fmt(l.tau_max) + "," + fmt(l.alpha_h) + "\n";
  }
  return out;
}

nlohmann::json report_json(const StudyReport& rep) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  const StudyConfig& c = rep.config;
  json j;
  j["config"] = {{"dim", c.dim},       {"k", c.k},           {"stab", std::string(to_string(c.stab))},
                 {"family", c.family}, {"levels", c.levels}, {"case", c.case_name},
                 {"fit_levels", c.fit_levels}};
  j["patch"] = rep.patch;
  j["rate_case"] = rep.rate_case;
  j["levels"] = json::array();
  for (const auto& l : rep.levels) {
    json row = {{"n", l.n},
                {"h", l.h},
                {"ndof", l.ndof},
                {"tau_max", l.tau_max},
                {"alpha_h", l.alpha_h},
                {"solver", l.solver},
                {"iterations", l.iterations},
                {"residual", l.residual}};
    const auto a = as_array(l.errors);
    for (int i = 0; i < 6; ++i) row[kColumns[i]] = a[i];
    j["levels"].push_back(row);
  }
  const auto s = as_array(rep.slopes);
  for (int i = 0; i < 6; ++i) j["slopes"][kColumns[i]] = number(s[i]);
  return j;
}

void write_report(const StudyReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.csv", report_csv(rep));
  write("report.json", report_json(rep).dump(2) + "\n");
  std::string dat = "# h";
  for (const char* c : kColumns) dat += std::string(" ") + c;
  dat += "\n";
  for (const auto& l : rep.levels) {
    dat += fmt(l.h);
    for (double v : as_array(l.errors)) dat += " " + fmt(v);
    dat += "\n";
  }
  write("rates.dat", dat);
}

}  // namespace vem
