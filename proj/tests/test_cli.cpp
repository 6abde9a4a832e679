#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "divform/runner.hpp"

using namespace divform;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(static_cast<bool>(f));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path dir;
  TempDir(const std::string& tag) {
    dir = fs::temp_directory_path() / ("divform_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string str() const { return dir.string(); }
};

const char* kSpectrumCfg = R"(
# lowest eigenvalues of the flat operator
[run]
command = spectrum
[profile]
kind = uniform
c = 1.0
[grid]
lower = 0
upper = 1
n = 64
[spectrum]
count = 3
)";

}  // namespace

TEST_CASE("config parser: strictness and diagnostics") {
  auto c = Config::parse("[a]\nx = 1\n# comment\n\n[b]\ny = two words\n");
  CHECK(c.get_int("a", "x") == 1);
  CHECK(c.get_string("b", "y") == "two words");
  CHECK(c.get_double("a", "missing", 2.5) == 2.5);
  CHECK_THROWS_AS(Config::parse("x = 1\n"), ConfigError);        // key before section
  CHECK_THROWS_AS(Config::parse("[a]\nx = 1\nx = 2\n"), ConfigError);  // duplicate
  CHECK_THROWS_AS((void)c.get_double("b", "y"), ConfigError);    // not a number

  // ensure_consumed names the first untouched key with its line number.
  auto d = Config::parse("[run]\ncommand = spectrum\nsolverr = dense\n");
  (void)d.get_string("run", "command");
  try {
    d.ensure_consumed();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("solverr") != std::string::npos);
    CHECK(e.line == 3);
  }
}

TEST_CASE("config digest is stable under reordering, sensitive to values") {
  auto a = Config::parse("[p]\nx = 1\ny = 2\n[q]\nz = 3\n");
  auto b = Config::parse("[q]\nz = 3\n[p]\ny = 2\nx = 1\n");
  auto c = Config::parse("[p]\nx = 1\ny = 2\n[q]\nz = 4\n");
  CHECK(a.digest() == b.digest());
  CHECK(a.digest() != c.digest());
  CHECK(a.digest().size() == 16);
}

TEST_CASE("run config validation") {
  auto rc = parse_config(kSpectrumCfg);
  CHECK(rc.command == RunConfig::Command::Spectrum);
  CHECK(rc.count == 3);
  CHECK(rc.grid.has_value());
  CHECK(rc.tolerances.heat_slack == 0.05);

  CHECK_THROWS_AS(parse_config("[run]\ncommand = warp\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\ncommand = spectrum\n[profile]\nkind = uniform\nc = 1\n"),
                  ConfigError);  // no [grid]
  CHECK_THROWS_AS(
      parse_config("[run]\ncommand = spectrum\n[tolerances]\nresidual = -1\n"
                   "[profile]\nkind = uniform\nc = 1\n[grid]\nlower = 0\nupper = 1\nn = 16\n"),
      ConfigError);  // negative tolerance
  auto rc2 = parse_config(
      "[run]\ncommand = spectrum\n[tolerances]\neps_disc = 0.03\n"
      "[profile]\nkind = uniform\nc = 1\n[grid]\nlower = 0\nupper = 1\nn = 16\n");
  CHECK(rc2.tolerances.heat_slack == 0.03);
}

TEST_CASE("spectrum run writes outputs, caches, and is cache-transparent") {
  TempDir td("spectrum");
  auto rc = parse_config(kSpectrumCfg);
  rc.out_dir = td.str();
  auto rec = run(rc);
  CHECK(rec.passed);
  CHECK(fs::exists(td.dir / "spectrum.csv"));
  CHECK(fs::exists(td.dir / "record.txt"));
  std::string csv1 = slurp((td.dir / "spectrum.csv").string());
  CHECK(csv1.rfind("index,eigenvalue,residual", 0) == 0);
  bool miss = false;
  for (const auto& v : rec.verdicts) miss = miss || v == "cache=miss";
  CHECK(miss);

  auto rec2 = run(rc);
  bool hit = false;
  for (const auto& v : rec2.verdicts) hit = hit || v == "cache=hit";
  CHECK(hit);
  CHECK(slurp((td.dir / "spectrum.csv").string()) == csv1);

  TempDir td2("spectrum_nocache");
  rc.out_dir = td2.str();
  rc.cache = false;
  run(rc);
  CHECK(slurp((td2.dir / "spectrum.csv").string()) == csv1);

  // First eigenvalue of the unit-interval flat operator: close to pi^2.
  std::istringstream lines(csv1);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  double lam = std::stod(first.substr(first.find(',') + 1));
  CHECK(lam == doctest::Approx(9.8696).epsilon(1e-2));
}

TEST_CASE("liouville run tabulates the transformed potential") {
  TempDir td("liouville");
  auto rc = parse_config(
      "[run]\ncommand = liouville\n[profile]\nkind = expdecay\nrate = 2\n"
      "[liouville]\nx_lo = -6\nx_hi = 0\n");
  rc.out_dir = td.str();
  auto rec = run(rc);
  CHECK(rec.passed);
  std::istringstream lines(slurp((td.dir / "liouville.csv").string()));
  std::string row;
  std::getline(lines, row);
  CHECK(row == "x,s,sigma,V");
  int checked = 0;
  while (std::getline(lines, row)) {
    std::istringstream cells(row);
    std::string cx, cs, csig, cv;
    std::getline(cells, cx, ',');
    std::getline(cells, cs, ',');
    std::getline(cells, csig, ',');
    std::getline(cells, cv, ',');
    double s = std::stod(cs), v = std::stod(cv);
    CHECK(v == doctest::Approx(3.0 / (4.0 * s * s)).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("report aggregates record files") {
  TempDir td("report");
  auto rc = parse_config(kSpectrumCfg);
  rc.out_dir = (td.dir / "a").string();
  run(rc);
  rc.out_dir = (td.dir / "b").string();
  run(rc);

  std::vector<std::string> recs{(td.dir / "a" / "record.txt").string(),
                                (td.dir / "b" / "record.txt").string()};
  auto sum = report(recs);
  CHECK(sum.all_passed);
  CHECK(sum.records == 2);
  CHECK(sum.text.find("ALL CHECKS PASSED") != std::string::npos);

  // A failing record flips the aggregate.
  std::ofstream bad((td.dir / "bad.txt").string());
  bad << "version=" << kRecordVersion << "\ncommand=spectrum\ndigest=0\n"
      << "passed=0\nwall_ms=1\n";
  bad.close();
  auto sum2 = report({recs[0], (td.dir / "bad.txt").string()});
  CHECK_FALSE(sum2.all_passed);
  CHECK(sum2.text.find("CHECK FAILURES PRESENT") != std::string::npos);

  CHECK_THROWS_AS(report({}), ConfigError);
  CHECK_THROWS_AS(report({(td.dir / "missing.txt").string()}), ConfigError);
  std::ofstream wrong((td.dir / "wrong.txt").string());
  wrong << "version=99\npassed=1\n";
  wrong.close();
  CHECK_THROWS_AS(report({(td.dir / "wrong.txt").string()}), std::runtime_error);
}
