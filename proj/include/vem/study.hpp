#pragma once

#include "vem/norms.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace vem {

struct StudyConfig {
  int dim = 2;
  int k = 1;
  Stabilization stab = Stabilization::S2;
  std::string family = "uniform";
  std::vector<int> levels{4, 8, 16, 32};
  std::string case_name = "sine";
  int fit_levels = 3;  // slopes use the last fit_levels levels (at least 3 when available)
  SolveOptions solver;
};

/// Keys mirror the CLI flags: dim, k, stab, family, levels (array or "4,8,16"), case.
StudyConfig study_config_from_json(const nlohmann::json& j);

/// Comma-separated positive integers.
std::vector<int> parse_levels(const std::string& s);

struct LevelResult {
  int n = 0;
  double h = 0.0;     // max cell diameter
  int ndof = 0;       // free unknowns
  ErrorNorms errors;
  double tau_max = 1.0;
  double alpha_h = 0.0;  // beta_h in 3D
  std::string solver;
  int iterations = 0;
  double residual = 0.0;
};

struct StudyReport {
  StudyConfig config;
  bool patch = false;       // polynomial solution with boundary lifting
  bool rate_case = true;
  std::vector<LevelResult> levels;
  ErrorNorms slopes;        // NaN where undefined
};

StudyReport run_study(const StudyConfig& config);

/// Least-squares slope of log(error) against log(h) over the last `last` points.
/// NaN when fewer than two usable points remain or an error is not positive.
double fit_slope(const std::vector<double>& h, const std::vector<double>& err, int last);

/// Threshold violations; empty when the report passes.
std::vector<std::string> check_rates(const StudyReport& report);

std::string report_csv(const StudyReport& report);
nlohmann::json report_json(const StudyReport& report);
/// Writes report.csv, report.json and rates.dat into dir.
void write_report(const StudyReport& report, const std::filesystem::path& dir);

}  // namespace vem
