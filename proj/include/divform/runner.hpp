#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divform/affiliation.hpp"
#include "divform/asymptotic.hpp"
#include "divform/config.hpp"

namespace divform {

inline constexpr int kRecordVersion = 1;

struct RunConfig {
  enum class Command {
    Assemble,
    Spectrum,
    Affiliate,
    Liouville,
    Asympt,
    Heatbound,
    Manifold,
    Report
  };
  Command command = Command::Spectrum;
  std::string command_name;
  std::string digest;

  std::optional<CoefficientProfile> profile;
  std::optional<Grid> grid;
  Boundary boundary = Boundary::Dirichlet;
  SpectralTolerances tolerances;

  bool plots = false;
  std::string out_dir = "out";
  unsigned seed = 1;
  bool cache = true;

  int count = 5;                  // spectrum
  ClassifyConfig classify_cfg;    // affiliate
  Interval x_window{-8.0, 0.0};   // liouville
  int samples = 4096;
  std::vector<double> half_widths{10, 20, 40};  // asympt
  Interval window{0.0, 10.0};
  double tol_h = -1.0;
  std::vector<double> ts{0.1, 0.5, 1.0};  // heatbound
  int n_pairs = 10;
  int nx = 16, ny = 16;                   // manifold
  std::vector<double> radii{2, 3, 4};
  double t_graph = 1.0;
  std::vector<std::string> records;       // report
};

struct ResultRecord {
  std::string command;
  std::string digest;
  std::vector<std::string> csv_paths;
  std::vector<std::string> verdicts;  // "name=pass" / "name=fail" / notes
  double wall_ms = 0.0;
  bool passed = true;
};

/// Parses and fully validates a run configuration; unknown keys are fatal.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Dispatches the configured analysis, writes CSVs (and optional SVG plots)
/// plus a plain-text record file under out_dir. Deterministic given
/// (config, seed).
ResultRecord run(const RunConfig& cfg);

struct ReportSummary {
  std::string text;
  bool all_passed = false;
  int records = 0;
};

/// Aggregates record files written by previous runs.
ReportSummary report(const std::vector<std::string>& record_paths);

}  // namespace divform
