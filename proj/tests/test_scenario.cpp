#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chemostab/scenario.hpp"
#include "support.hpp"

using namespace chemostab;

namespace {

std::string scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("chemostab_scenario_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

Config with_output(const std::string& dir, const std::string& extra = "") {
  return Config::parse(extra + "[output]\ndir = " + dir + "\n");
}

std::size_t column(const CsvTable& t, const std::string& name) {
  return std::find(t.header.begin(), t.header.end(), name) - t.header.begin();
}

}  // namespace

TEST_CASE("every scenario has a preset") {
  CHECK(scenario_names().size() == 12);
  for (const auto& n : scenario_names()) CHECK_NOTHROW(scenario_preset(n));
  CHECK_ERROR(scenario_preset("turing"), ErrorKind::ConfigError);
}

TEST_CASE("hypothesis gates refuse the wrong regime") {
  const std::string dir = scratch_dir("gate");
  Config cfg = with_output(dir);
  cfg.set("scenario.chi0_fraction", "1.1");
  try {
    run_scenario("lyapunov-i", cfg, 1);
    FAIL("expected HypothesisNotMet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisNotMet);
    CHECK(std::string(e.what()).find("chi0 < chi**,1") != std::string::npos);
  }
  Config positive = with_output(dir);
  positive.set("chi0", "0.5");
  CHECK_ERROR(run_scenario("negative-sensitivity", positive, 1), ErrorKind::HypothesisNotMet);
  Config no_logistic = with_output(dir);
  no_logistic.set("a", "0");
  no_logistic.set("b", "0");
  CHECK_ERROR(run_scenario("persistence", no_logistic, 1), ErrorKind::HypothesisNotMet);
  CHECK(!std::filesystem::exists(dir + "/lyapunov-i_verdict.json"));
}

TEST_CASE("stable dichotomy scenario writes its reports") {
  const std::string dir = scratch_dir("stable");
  const auto out = run_scenario("stable-dichotomy", with_output(dir), 1);
  CHECK(out.pass);
  for (const char* f : {"_trajectory.csv", "_diagnostics.csv", "_verdict.json"})
    CHECK(std::filesystem::exists(dir + "/stable-dichotomy" + f));
  CHECK(out.verdict["hypotheses_checked"][0]["text"] == "chi0 < chi*");
  CHECK(out.verdict["parameters"]["chi0"].get<double>() == doctest::Approx(3.5));
  std::filesystem::remove_all(dir);
}

TEST_CASE("beta sweep trends") {
  const CsvTable t = sweep_table(Config::parse("[sweep]\nbeta = 1, 2, 4, 8, 16"), 1);
  REQUIRE(t.rows.size() == 5);
  const std::size_t c3 = column(t, "chi_ss3"), c2 = column(t, "chi_ss2");
  for (std::size_t k = 1; k < 5; ++k) {
    CHECK(t.rows[k][c3] < t.rows[k - 1][c3]);
    CHECK(t.rows[k][c2] > t.rows[k - 1][c2]);
  }

  const CsvTable range = sweep_table(Config::parse("[sweep]\nchi0 = 0:2:5\nmu = 1, 2"), 1);
  CHECK(range.rows.size() == 10);
  CHECK(range.rows[2][0] == 0.5);

  CHECK_ERROR(sweep_table(Config::parse("[sweep]\nchi0 = 0:1:200\nbeta = 0:1:200"), 1),
              ErrorKind::GridTooLarge);
  CHECK_ERROR(sweep_table(Config::parse("[sweep]\nchi0 = 0:1"), 1), ErrorKind::ConfigError);
  CHECK_ERROR(sweep_table(Config::parse("[sweep]\nwidth = 1, 2"), 1), ErrorKind::ConfigError);
}

TEST_CASE("single-point sweep matches the thresholds-only report") {
  const std::string dir = scratch_dir("single");
  const Config cfg = with_output(dir, "beta = 2\nalpha = 3\n");
  const auto report = run_scenario("thresholds-only", cfg, 3);
  Config point = cfg;
  point.set("sweep.chi0", "0");
  const CsvTable t = sweep_table(point, 3);
  REQUIRE(t.rows.size() == 1);
  const auto& th = report.verdict["measured"]["thresholds"];
  CHECK(t.rows[0][column(t, "chi_star")] == th["chi_star"].get<double>());
  for (int i = 0; i < 4; ++i)
    CHECK(t.rows[0][column(t, "chi_ss" + std::to_string(i + 1))] ==
          th["chi_ss"][i]["value"].get<double>());
  std::filesystem::remove_all(dir);
}
