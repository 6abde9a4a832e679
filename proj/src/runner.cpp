#include "divform/runner.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "divform/csv.hpp"
#include "divform/graphmanifold.hpp"
#include "divform/liouville.hpp"
#include "divform/metric.hpp"

namespace fs = std::filesystem;

namespace divform {

namespace {

CoefficientProfile parse_profile(const Config& c, const std::string& sec) {
  std::string kind = c.get_string(sec, "kind");
  CoefficientProfile p = [&]() {
    if (kind == "uniform") return CoefficientProfile::uniform(c.get_double(sec, "c"));
    if (kind == "expdecay")
      return CoefficientProfile::exp_decay(c.get_double(sec, "rate"));
    if (kind == "power") return CoefficientProfile::power(c.get_double(sec, "alpha"));
    if (kind == "periodic")
      return CoefficientProfile::periodic(c.get_double(sec, "mean"),
                                          c.get_double(sec, "amp"),
                                          c.get_double(sec, "period"));
    if (kind == "rationalbump")
      return CoefficientProfile::rational_bump(c.get_double(sec, "scale", 1.0),
                                               c.get_double(sec, "width", 1.0));
    if (kind == "blend")
      return CoefficientProfile::blend(
          c.get_double(sec, "left"), c.get_double(sec, "right"),
          c.get_double(sec, "center", 0.0), c.get_double(sec, "width", 1.0));
    throw ConfigError("unknown profile kind '" + kind + "'", 0);
  }();
  double shift = c.get_double(sec, "shift", 0.0);
  return shift == 0.0 ? p : p.translated(shift);
}

Boundary parse_boundary(const std::string& s) {
  if (s == "dirichlet") return Boundary::Dirichlet;
  if (s == "neumann") return Boundary::Neumann;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("unknown boundary '" + s + "'", 0);
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_svg_polyline(const std::string& path, const std::vector<double>& xs,
                        const std::vector<double>& ys, const std::string& title) {
  if (xs.size() < 2) return;
  double xlo = xs[0], xhi = xs[0], ylo = ys[0], yhi = ys[0];
  for (size_t i = 0; i < xs.size(); ++i) {
    xlo = std::min(xlo, xs[i]);
    xhi = std::max(xhi, xs[i]);
    ylo = std::min(ylo, ys[i]);
    yhi = std::max(yhi, ys[i]);
  }
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  const double W = 640, H = 400, M = 40;
  std::ofstream f(path, std::ios::trunc);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
    << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"10\" y=\"20\">" << title << "</text>\n<polyline fill=\"none\" "
    << "stroke=\"black\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    double px = M + (xs[i] - xlo) / (xhi - xlo) * (W - 2 * M);
    double py = H - M - (ys[i] - ylo) / (yhi - ylo) * (H - 2 * M);
    f << format_number(px) << ',' << format_number(py) << ' ';
  }
  f << "\"/>\n</svg>\n";
}

struct OutputTracker {
  std::vector<std::string> paths;
  std::string add(const std::string& p) {
    paths.push_back(p);
    return p;
  }
  void remove_all() {
    for (const auto& p : paths) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  Config c = Config::parse(text);
  RunConfig rc;
  rc.digest = c.digest();
  rc.command_name = c.get_string("run", "command");
  static const std::map<std::string, RunConfig::Command> commands = {
      {"assemble", RunConfig::Command::Assemble},
      {"spectrum", RunConfig::Command::Spectrum},
      {"affiliate", RunConfig::Command::Affiliate},
      {"liouville", RunConfig::Command::Liouville},
      {"asympt", RunConfig::Command::Asympt},
      {"heatbound", RunConfig::Command::Heatbound},
      {"manifold", RunConfig::Command::Manifold},
      {"report", RunConfig::Command::Report}};
  auto it = commands.find(rc.command_name);
  if (it == commands.end())
    throw ConfigError("unknown command '" + rc.command_name + "'", 0);
  rc.command = it->second;

  rc.plots = c.get_bool("run", "plots", false);
  rc.out_dir = c.get_string("run", "out", rc.out_dir);
  rc.seed = static_cast<unsigned>(c.get_int("run", "seed", 1));
  rc.cache = c.get_bool("run", "cache", true);

  // Tolerance overrides (eps_disc is the inequality-audit slack).
  rc.tolerances.residual = c.get_double("tolerances", "residual", 1e-8);
  rc.tolerances.gram = c.get_double("tolerances", "gram", 1e-8);
  rc.tolerances.cluster_gap_factor =
      c.get_double("tolerances", "cluster_gap_factor", 5.0);
  rc.tolerances.heat_slack = c.get_double("tolerances", "eps_disc", 0.05);
  rc.tolerances.hausdorff = c.get_double("tolerances", "hausdorff", -1.0);
  for (double v : {rc.tolerances.residual, rc.tolerances.gram,
                   rc.tolerances.cluster_gap_factor, rc.tolerances.heat_slack})
    if (!(v > 0.0)) throw ConfigError("tolerance overrides must be positive", 0);

  const bool needs_profile = rc.command != RunConfig::Command::Report &&
                             rc.command != RunConfig::Command::Manifold;
  if (needs_profile) rc.profile = parse_profile(c, "profile");
  if (c.has("grid", "n")) {
    Boundary b = parse_boundary(c.get_string("grid", "boundary", "dirichlet"));
    rc.boundary = b;
    rc.grid = Grid::line(c.get_double("grid", "lower"), c.get_double("grid", "upper"),
                         c.get_int("grid", "n"), b == Boundary::Periodic);
  }

  switch (rc.command) {
    case RunConfig::Command::Assemble:
      if (!rc.grid) throw ConfigError("assemble requires a [grid] section", 0);
      break;
    case RunConfig::Command::Spectrum:
      if (!rc.grid) throw ConfigError("spectrum requires a [grid] section", 0);
      rc.count = c.get_int("spectrum", "count", 5);
      break;
    case RunConfig::Command::Affiliate: {
      rc.classify_cfg.k_list = c.get_list("affiliate", "k_list", rc.classify_cfg.k_list);
      rc.classify_cfg.s_list = c.get_list("affiliate", "s_list", rc.classify_cfg.s_list);
      rc.classify_cfg.half_widths =
          c.get_list("affiliate", "half_widths", rc.classify_cfg.half_widths);
      rc.classify_cfg.target_spacing =
          c.get_double("affiliate", "target_spacing", rc.classify_cfg.target_spacing);
      std::string mode = c.get_string("affiliate", "window_mode", "symmetric");
      if (mode == "symmetric")
        rc.classify_cfg.mode = WindowMode::Symmetric;
      else if (mode == "shiftpositive")
        rc.classify_cfg.mode = WindowMode::ShiftPositive;
      else
        throw ConfigError("unknown window_mode '" + mode + "'", 0);
      break;
    }
    case RunConfig::Command::Liouville:
      rc.x_window = {c.get_double("liouville", "x_lo", rc.x_window.lo),
                     c.get_double("liouville", "x_hi", rc.x_window.hi)};
      rc.samples = c.get_int("liouville", "samples", rc.samples);
      break;
    case RunConfig::Command::Asympt:
      rc.half_widths = c.get_list("asympt", "half_widths", rc.half_widths);
      rc.window = {c.get_double("asympt", "window_lo", rc.window.lo),
                   c.get_double("asympt", "window_hi", rc.window.hi)};
      rc.tol_h = c.get_double("asympt", "tol_h", -1.0);
      break;
    case RunConfig::Command::Heatbound:
      if (!rc.grid) throw ConfigError("heatbound requires a [grid] section", 0);
      rc.ts = c.get_list("heatbound", "ts", rc.ts);
      rc.n_pairs = c.get_int("heatbound", "pairs", rc.n_pairs);
      break;
    case RunConfig::Command::Manifold:
      rc.nx = c.get_int("manifold", "nx", rc.nx);
      rc.ny = c.get_int("manifold", "ny", rc.ny);
      rc.radii = c.get_list("manifold", "radii", rc.radii);
      rc.t_graph = c.get_double("manifold", "t", rc.t_graph);
      break;
    case RunConfig::Command::Report: {
      std::string paths = c.get_string("report", "records", "");
      std::istringstream in(paths);
      std::string p;
      while (in >> p) rc.records.push_back(p);
      break;
    }
  }
  c.ensure_consumed();
  return rc;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

void run_assemble(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  auto op = assemble(*cfg.profile, *cfg.grid, cfg.boundary);
  Rows rows;
  for (int i = 0; i < op.matrix.rows(); ++i)
    for (int j = 0; j < op.matrix.cols(); ++j)
      if (op.matrix(i, j) != 0.0)
        rows.push_back({std::to_string(i), std::to_string(j),
                        format_number(op.matrix(i, j))});
  std::string path = out.add(cfg.out_dir + "/operator.csv");
  write_csv(path, {"row", "col", "value"}, rows);
  rec.csv_paths.push_back(path);
  for (const auto& w : op.warnings) rec.verdicts.push_back("warning: " + w);
}

void run_spectrum(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  SpectralData data;
  bool cached = false;
  std::string cache_path;
  if (cfg.cache) {
    std::string key = hex16(fnv(cfg.profile->tag() + "|" + to_string(cfg.boundary) +
                                "|" + std::to_string(cfg.grid->lower[0]) + "|" +
                                std::to_string(cfg.grid->upper[0]) + "|" +
                                std::to_string(cfg.grid->npts[0]) + "|" +
                                std::to_string(cfg.count)));
    fs::create_directories(cfg.out_dir + "/cache");
    cache_path = cfg.out_dir + "/cache/" + key + ".txt";
    std::ifstream in(cache_path);
    if (in) {
      int n = 0;
      in >> n;
      data.eigenvalues.resize(n);
      data.residuals.resize(n);
      for (int i = 0; i < n && in; ++i) in >> data.eigenvalues(i) >> data.residuals(i);
      cached = static_cast<bool>(in);
    }
  }
  if (!cached) {
    auto op = assemble(*cfg.profile, *cfg.grid, cfg.boundary);
    data = eigensolve(op, cfg.count, true);
    if (cfg.cache) {
      std::ofstream outf(cache_path, std::ios::trunc);
      outf.precision(17);
      outf << data.eigenvalues.size() << "\n";
      for (int i = 0; i < data.eigenvalues.size(); ++i)
        outf << data.eigenvalues(i) << " " << data.residuals(i) << "\n";
    }
  }
  Rows rows;
  bool ok = true;
  std::vector<double> xs, ys;
  for (int i = 0; i < data.eigenvalues.size(); ++i) {
    rows.push_back({std::to_string(i), format_number(data.eigenvalues(i)),
                    format_number(data.residuals(i))});
    ok = ok && data.residuals(i) <=
                   cfg.tolerances.residual * (1.0 + std::abs(data.eigenvalues(i)));
    xs.push_back(i);
    ys.push_back(data.eigenvalues(i));
  }
  std::string path = out.add(cfg.out_dir + "/spectrum.csv");
  write_csv(path, {"index", "eigenvalue", "residual"}, rows);
  rec.csv_paths.push_back(path);
  rec.verdicts.push_back(std::string("residuals=") + (ok ? "pass" : "fail"));
  rec.verdicts.push_back(std::string("cache=") + (cached ? "hit" : "miss"));
  rec.passed = ok;
  if (cfg.plots)
    write_svg_polyline(out.add(cfg.out_dir + "/spectrum.svg"), xs, ys, "eigenvalues");
}

void run_affiliate(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  AffiliationVerdict v = classify(*cfg.profile, cfg.classify_cfg);
  Rows rows;
  auto emit = [&rows](const std::vector<SweepResult>& sweeps) {
    for (const auto& sw : sweeps)
      for (auto [p, norm] : sw.samples)
        rows.push_back({sw.parameter, format_number(sw.half_width), format_number(p),
                        format_number(norm)});
  };
  emit(v.v_sweeps);
  emit(v.u_sweeps);
  std::string path = out.add(cfg.out_dir + "/sweeps.csv");
  write_csv(path, {"parameter", "half_width", "value", "norm"}, rows);
  rec.csv_paths.push_back(path);
  std::string vpath = out.add(cfg.out_dir + "/verdict.txt");
  std::ofstream vf(vpath, std::ios::trunc);
  vf << to_string(v.verdict) << "\n";
  rec.verdicts.push_back("verdict=" + to_string(v.verdict));
  if (cfg.plots && !v.u_sweeps.empty()) {
    std::vector<double> xs, ys;
    for (const auto& sw : v.u_sweeps)
      for (auto [p, norm] : sw.samples) {
        xs.push_back(p);
        ys.push_back(norm);
      }
    write_svg_polyline(out.add(cfg.out_dir + "/u_sweep.svg"), xs, ys,
                       "translation sweep");
  }
}

void run_liouville(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  LiouvilleTransform tr = transform(*cfg.profile, cfg.x_window, cfg.samples);
  Rows rows;
  for (size_t i = 0; i < tr.x.size(); ++i)
    rows.push_back({format_number(tr.x[i]), format_number(tr.s[i]),
                    format_number(tr.sigma[i]), format_number(tr.potential[i])});
  std::string path = out.add(cfg.out_dir + "/liouville.csv");
  write_csv(path, {"x", "s", "sigma", "V"}, rows);
  rec.csv_paths.push_back(path);
  rec.verdicts.push_back(std::string("closed_form=") +
                         (tr.closed_form ? "yes" : "no"));
}

void run_asympt(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  auto family = AsymptoticFamily::from_builtin(*cfg.profile);
  CompareConfig cc;
  cc.essential.half_widths = cfg.half_widths;
  cc.essential.window = cfg.window;
  cc.essential.tol = cfg.tolerances;
  cc.unions.window = cfg.window;
  cc.unions.fallback = cc.essential;
  cc.tol_h = cfg.tol_h;
  EssentialComparison rep = compare_essential(*cfg.profile, family, cc);
  Rows rows;
  for (const auto& iv : rep.base_estimate.intervals)
    rows.push_back({"essential", format_number(iv.lo), format_number(iv.hi)});
  for (const auto& iv : rep.union_estimate.intervals)
    rows.push_back({"union", format_number(iv.lo), format_number(iv.hi)});
  std::string path = out.add(cfg.out_dir + "/essential.csv");
  write_csv(path, {"source", "lo", "hi"}, rows);
  rec.csv_paths.push_back(path);
  rec.verdicts.push_back(std::string("comparison=") +
                         (rep.agree ? "agree" : "disagree"));
  rec.verdicts.push_back("hausdorff=" + format_number(rep.hausdorff));
  rec.verdicts.push_back("tol_h=" + format_number(rep.tol_h));
  if (!rep.note.empty()) rec.verdicts.push_back("note: " + rep.note);
}

void run_heatbound(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  auto op = assemble(*cfg.profile, *cfg.grid, cfg.boundary);
  Interval dom{cfg.grid->lower[0], cfg.grid->upper[0]};
  MetricField metric = MetricField::closed_1d(*cfg.profile, dom);
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> pick(dom.lo, dom.hi);
  std::vector<std::pair<Interval, Interval>> pairs;
  double w = 0.05 * dom.length();
  while (static_cast<int>(pairs.size()) < cfg.n_pairs) {
    double a = pick(rng), b = pick(rng);
    Interval E{a, std::min(a + w, dom.hi)}, F{b, std::min(b + w, dom.hi)};
    if (std::max(E.lo, F.lo) <= std::min(E.hi, F.hi)) continue;  // overlapping
    pairs.push_back({E, F});
  }
  HeatBoundReport rep =
      verify_heat_bound(op, metric, pairs, cfg.ts, cfg.tolerances.heat_slack);
  Rows rows;
  std::string first_violation;
  for (const auto& r : rep.rows) {
    rows.push_back({std::to_string(r.e_id), std::to_string(r.f_id),
                    format_number(r.t), format_number(r.measured),
                    format_number(r.bound), format_number(r.ratio),
                    r.pass ? "pass" : "fail"});
    if (!r.pass && first_violation.empty())
      first_violation = "violation at pair (" + std::to_string(r.e_id) + "," +
                        std::to_string(r.f_id) + ") t=" + format_number(r.t);
  }
  std::string path = out.add(cfg.out_dir + "/heatbound.csv");
  write_csv(path, {"e_id", "f_id", "t", "measured", "bound", "ratio", "status"},
            rows);
  rec.csv_paths.push_back(path);
  rec.passed = rep.violations == 0;
  rec.verdicts.push_back("violations=" + std::to_string(rep.violations));
  if (!first_violation.empty()) rec.verdicts.push_back(first_violation);
}

void run_manifold(const RunConfig& cfg, ResultRecord& rec, OutputTracker& out) {
  WeightedGraph g = WeightedGraph::lattice2d(cfg.nx, cfg.ny);
  auto doubling = doubling_constant(g, cfg.radii);
  auto poincare = poincare_constant(g, cfg.radii);
  auto gauss = gaussian_fit(g, cfg.t_graph);
  auto holder = holder_audit(g, cfg.t_graph);
  auto trunc = truncation_error(g, cfg.radii);

  Rows rows{{"doubling_D", format_number(doubling.value)},
            {"poincare_P", format_number(poincare.value)},
            {"gaussian_C", format_number(gauss.C)},
            {"gaussian_a", format_number(gauss.exponent)},
            {"gaussian_r2", format_number(gauss.r2)},
            {"holder_C", format_number(holder.C)},
            {"holder_alpha", format_number(holder.exponent)},
            {"truncation_K", format_number(trunc.K)},
            {"truncation_a", format_number(trunc.a)},
            {"truncation_r2", format_number(trunc.r2)}};
  std::string path = out.add(cfg.out_dir + "/manifold.csv");
  write_csv(path, {"quantity", "value"}, rows);
  rec.csv_paths.push_back(path);

  Rows trows;
  for (size_t i = 0; i < trunc.radii.size(); ++i)
    trows.push_back({format_number(trunc.radii[i]), format_number(trunc.errors[i]),
                     format_number(trunc.schur_bounds[i])});
  std::string tpath = out.add(cfg.out_dir + "/truncation.csv");
  write_csv(tpath, {"r", "error", "schur_bound"}, trows);
  rec.csv_paths.push_back(tpath);

  bool ok = gauss.exponent > 0.0 && gauss.violations.empty() &&
            holder.violations.empty() && !doubling.inconclusive &&
            !poincare.inconclusive;
  rec.passed = ok;
  rec.verdicts.push_back(std::string("kernel_audits=") + (ok ? "pass" : "fail"));
}

void write_record(const RunConfig& cfg, const ResultRecord& rec) {
  std::ofstream f(cfg.out_dir + "/record.txt", std::ios::trunc);
  f << "version=" << kRecordVersion << "\n";
  f << "command=" << rec.command << "\n";
  f << "digest=" << rec.digest << "\n";
  f << "passed=" << (rec.passed ? 1 : 0) << "\n";
  f << "wall_ms=" << format_number(rec.wall_ms) << "\n";
  for (const auto& p : rec.csv_paths) f << "csv=" << p << "\n";
  for (const auto& v : rec.verdicts) f << "verdict=" << v << "\n";
}

}  // namespace

ResultRecord run(const RunConfig& cfg) {
  ResultRecord rec;
  rec.command = cfg.command_name;
  rec.digest = cfg.digest;
  fs::create_directories(cfg.out_dir);
  OutputTracker out;
  auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg.command) {
      case RunConfig::Command::Assemble: run_assemble(cfg, rec, out); break;
      case RunConfig::Command::Spectrum: run_spectrum(cfg, rec, out); break;
      case RunConfig::Command::Affiliate: run_affiliate(cfg, rec, out); break;
      case RunConfig::Command::Liouville: run_liouville(cfg, rec, out); break;
      case RunConfig::Command::Asympt: run_asympt(cfg, rec, out); break;
      case RunConfig::Command::Heatbound: run_heatbound(cfg, rec, out); break;
      case RunConfig::Command::Manifold: run_manifold(cfg, rec, out); break;
      case RunConfig::Command::Report: {
        ReportSummary sum = report(cfg.records);
        std::ofstream f(cfg.out_dir + "/summary.txt", std::ios::trunc);
        f << sum.text;
        rec.passed = sum.all_passed;
        rec.verdicts.push_back("records=" + std::to_string(sum.records));
        break;
      }
    }
  } catch (...) {
    out.remove_all();
    throw;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  write_record(cfg, rec);
  return rec;
}

ReportSummary report(const std::vector<std::string>& record_paths) {
  if (record_paths.empty())
    throw ConfigError("report: no record files given", 0);
  ReportSummary sum;
  sum.all_passed = true;
  std::ostringstream text;
  for (const auto& path : record_paths) {
    std::ifstream f(path);
    if (!f) throw ConfigError("report: cannot open record file " + path, 0);
    std::string line, command = "?";
    bool passed = false;
    int version = -1;
    std::vector<std::string> verdicts;
    while (std::getline(f, line)) {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq), value = line.substr(eq + 1);
      if (key == "version") version = std::stoi(value);
      if (key == "command") command = value;
      if (key == "passed") passed = value == "1";
      if (key == "verdict") verdicts.push_back(value);
    }
    if (version != kRecordVersion)
      throw std::runtime_error("report: record version mismatch in " + path);
    ++sum.records;
    sum.all_passed = sum.all_passed && passed;
    text << command << ": " << (passed ? "pass" : "FAIL");
    for (const auto& v : verdicts) text << "; " << v;
    text << "\n";
  }
  text << (sum.all_passed ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  sum.text = text.str();
  return sum;
}

}  // namespace divform
