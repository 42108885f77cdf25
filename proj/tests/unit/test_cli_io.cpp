#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "plateslip/errors.hpp"
#include "plateslip/output.hpp"
#include "plateslip_cli/cli.hpp"

using namespace plateslip;
using plateslip::testing::config_path;
using plateslip::testing::golden_path;
using plateslip::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "plateslip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  FAIL("missing column " << name);
  return -1;
}

}  // namespace

TEST_CASE("resolved configuration round-trips") {
  const RunConfig c = load_config(config_path("ramp_2d.json"));
  const std::string once = resolved_config_json(c);
  CHECK(resolved_config_json(parse_config(once)) == once);
  const RunConfig d = load_config(config_path("damage_2d.json"));
  CHECK(resolved_config_json(parse_config(resolved_config_json(d))) == resolved_config_json(d));
}

TEST_CASE("invalid configurations are rejected with exit code 2") {
  const auto dir = scratch_dir("invalid");
  const std::string bad = (dir / "bad.json").string();
  write_text(bad, R"({"mesh": {"dim": 2}, "solver": {"tau": 0.3}, "damage": {"enabled": true, "r": 2.0}})");
  const CliResult r = invoke({"simulate", "--config", bad, "--out", (dir / "out").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("$.solver.tau") != std::string::npos);
  CHECK(r.err.find("$.damage.r") != std::string::npos);
  CHECK(invoke({"simulate", "--config", bad}).code == cli::kConfigError);
  CHECK_THROWS_AS((void)parse_config("{not json"), ConfigError);
}

TEST_CASE("zero load run is flat") {
  const auto dir = scratch_dir("zero");
  const CliResult r = invoke({"simulate", "--config", config_path("zero_load.json"), "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = read_csv((dir / "timeseries.csv").string());
  const int e = column(rows[0], "energy");
  const int w = column(rows[0], "work");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][e]) == 0.0);
    CHECK(std::stod(rows[i][w]) == 0.0);
  }
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "fields" / "step_0000.csv"));
  CHECK(fs::exists(dir / "fields" / "step_0000.vtk"));
}

TEST_CASE("simulate, verify, and tamper with a run") {
  const auto dir = scratch_dir("bar");
  REQUIRE(invoke({"simulate", "--config", config_path("bar_1d.json"), "--out", dir.string()}).code == cli::kOk);
  CHECK(fs::exists(dir / "plots" / "hysteresis.csv"));
  const auto hyst = read_csv((dir / "plots" / "hysteresis.csv").string());
  CHECK(hyst[0][column(hyst[0], "traction")] == "traction");

  const CliResult v = invoke({"verify", "--trajectory", dir.string()});
  CHECK(v.code == cli::kOk);
  CHECK(read_text((dir / "report_verify.json").string()) == read_text((dir / "report.json").string()));

  const auto rows = read_csv((dir / "fields" / "step_0010.csv").string());
  const int g = column(rows[0], "gamma");
  std::size_t target = 1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][g]) > std::stod(rows[target][g])) target = i;
  }
  std::ostringstream tampered;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) tampered << ',';
      tampered << (i == target && static_cast<int>(j) == g ? format_double(0.5 * std::stod(rows[i][j])) : rows[i][j]);
    }
    tampered << '\n';
  }
  const std::string original = read_text((dir / "fields" / "step_0010.csv").string());
  write_text((dir / "fields" / "step_0010.csv").string(), tampered.str());
  const CliResult bad = invoke({"verify", "--trajectory", dir.string()});
  CHECK(bad.code == cli::kCertificationFailed);
  CHECK(bad.err.find("state corruption") != std::string::npos);

  write_text((dir / "fields" / "step_0010.csv").string(), original);
  fs::remove(dir / "fields" / "step_0020.csv");
  CHECK(invoke({"verify", "--trajectory", dir.string()}).code == cli::kMissingSnapshots);
}

TEST_CASE("sparse snapshots cannot be verified") {
  const auto dir = scratch_dir("sparse");
  RunConfig c = load_config(config_path("zero_load.json"));
  c.output.every_k = 2;
  write_text((dir / "config.json").string(), resolved_config_json(c));
  REQUIRE(invoke({"simulate", "--config", (dir / "config.json").string(), "--out", (dir / "run").string()}).code ==
          cli::kOk);
  CHECK_FALSE(fs::exists(dir / "run" / "fields" / "step_0001.csv"));
  CHECK(invoke({"verify", "--trajectory", (dir / "run").string()}).code == cli::kMissingSnapshots);
  CHECK(invoke({"verify", "--trajectory", (dir / "nowhere").string()}).code == cli::kMissingSnapshots);
}

TEST_CASE("law dump") {
  const auto dir = scratch_dir("law");
  const std::string out = (dir / "law.csv").string();
  REQUIRE(invoke({"law", "dump", "--config", config_path("ramp_2d.json"), "--grid", "41", "--out", out}).code ==
          cli::kOk);
  const RunConfig c = load_config(config_path("ramp_2d.json"));
  const CohesiveLaw law = make_law(c.law);
  const RegularizedLaw reg(law, c.solver.eps);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 41 * 41 + 1);
  const int y = column(rows[0], "y"), z = column(rows[0], "z");
  const int p = column(rows[0], "phi"), pe = column(rows[0], "phi_eps");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double yi = std::stod(rows[i][y]);
    const double zi = std::stod(rows[i][z]);
    if (yi == zi) CHECK(std::stod(rows[i][p]) == doctest::Approx(law.psi(yi)).epsilon(1e-15));
    CHECK(std::abs(std::stod(rows[i][p]) - std::stod(rows[i][pe])) <= reg.phi_gap_bound());
  }
  CHECK(invoke({"law", "dump", "--config", config_path("ramp_2d.json"), "--grid", "1"}).code == cli::kConfigError);
}

TEST_CASE("bar time series matches the stored reference") {
  const auto dir = scratch_dir("golden");
  REQUIRE(invoke({"simulate", "--config", config_path("bar_1d.json"), "--out", dir.string()}).code == cli::kOk);
  const auto now = read_csv((dir / "timeseries.csv").string());
  const auto ref = read_csv(golden_path("bar_1d_timeseries.csv"));
  REQUIRE(now.size() == ref.size());
  CHECK(now[0] == ref[0]);
  for (std::size_t i = 1; i < ref.size(); ++i) {
    REQUIRE(now[i].size() == ref[i].size());
    for (std::size_t j = 0; j < ref[i].size(); ++j) {
      const double a = std::stod(now[i][j]);
      const double b = std::stod(ref[i][j]);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    }
  }
}
