#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "chemostab/config.hpp"
#include "chemostab/report.hpp"
#include "support.hpp"

using namespace chemostab;

TEST_CASE("config text format") {
  const Config cfg = Config::parse(R"(
# unit coefficients
chi0 = 3.5   # trailing comment
beta = 1
[domain]
lengths = pi
cells = 128
[time]
t_end = 2.5
)");
  CHECK(cfg.get_double("chi0", 0) == 3.5);
  CHECK(cfg.get_list("domain.lengths") == std::vector<double>{std::numbers::pi});
  CHECK(cfg.get_int("domain.cells", 0) == 128);
  CHECK(cfg.get_double("time.t_end", 0) == 2.5);
  CHECK(!cfg.has("time.dt"));

  CHECK_ERROR(Config::parse("chi_0 = 1"), ErrorKind::ConfigError);
  CHECK_ERROR(Config::parse("chi0 1"), ErrorKind::ConfigError);
  CHECK_ERROR(Config::parse("[domain"), ErrorKind::ConfigError);
  CHECK_ERROR(Config::parse("chi0 = abc").get_double("chi0", 0), ErrorKind::ConfigError);
  CHECK_ERROR(Config::parse("[domain]\ncells = 1.5").get_int("domain.cells", 0), ErrorKind::ConfigError);
  CHECK_ERROR(Config::load("/nonexistent/file.conf"), ErrorKind::IoError);

  Config over = cfg;
  over.set_assignment("chi0=4.25");
  CHECK(over.get_double("chi0", 0) == 4.25);
  CHECK_ERROR(over.set_assignment("chi0"), ErrorKind::ConfigError);
  CHECK(Config::parse("[sweep]\nbeta = 1, 2").has("sweep.beta"));
}

TEST_CASE("building model objects from config") {
  const Config cfg = Config::parse("chi0 = 2\na = 4\nalpha = 2\n[domain]\ndimension = 2\nlengths = 1, 2\ncells = 16, 32\n"
                                   "[init]\nkind = cosine\nepsilon = 0.1\n[time]\npolicy = fixed\ndt = 0.002\n");
  const ModelParams p = params_from(cfg);
  CHECK(p.chi0 == 2);
  CHECK(p.a == 4);
  const GridDomain g = grid_from(cfg);
  CHECK(g.dimension() == 2);
  CHECK(g.cells(1) == 32);
  const auto spec = init_from(cfg, g, p, 1);
  const auto& c = std::get<CosineInit>(spec);
  CHECK(c.u_star == doctest::Approx(2.0));  // (a/b)^{1/α}
  CHECK(c.epsilon == 0.1);
  const StepConfig s = step_from(cfg);
  CHECK(s.policy == DtPolicy::Fixed);
  CHECK(s.dt == 0.002);

  const GridDomain d = grid_from(Config{});
  CHECK(d.dimension() == 1);
  CHECK(d.cells(0) == 256);
  CHECK(d.length(0) == std::numbers::pi);

  CHECK_ERROR(grid_from(Config::parse("[domain]\ndimension = 3")), ErrorKind::InvalidDomain);
  CHECK_ERROR(step_from(Config::parse("[time]\npolicy = sometimes")), ErrorKind::ConfigError);
  CHECK_ERROR(params_from(Config::parse("m = 0.5")), ErrorKind::MIsBelowOne);

  // Random initial data is reproducible from the seed.
  const Config rnd = Config::parse("[init]\nkind = random\namplitude = 0.2");
  const auto a = std::get<ArrayInit>(init_from(rnd, d, ModelParams{}, 7)).values;
  const auto b = std::get<ArrayInit>(init_from(rnd, d, ModelParams{}, 7)).values;
  const auto other = std::get<ArrayInit>(init_from(rnd, d, ModelParams{}, 8)).values;
  CHECK(a == b);
  CHECK(a != other);
}

TEST_CASE("array initial data from file") {
  const auto path = std::filesystem::temp_directory_path() / "chemostab_init_test.txt";
  {
    std::ofstream out(path);
    for (int k = 0; k < 8; ++k) out << 1.0 + 0.1 * k << (k % 2 ? "\n" : ",");
  }
  const GridDomain g = GridDomain::interval(1.0, 8);
  const Config cfg = Config::parse("[init]\nkind = array\nfile = " + path.string());
  const auto values = std::get<ArrayInit>(init_from(cfg, g, ModelParams{}, 1)).values;
  REQUIRE(values.size() == 8);
  CHECK(values[7] == doctest::Approx(1.7));
  std::filesystem::remove(path);
}

TEST_CASE("report formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(number_json(INFINITY) == "inf");
  CHECK(number_json(2.5) == 2.5);

  Trajectory t;
  t.samples.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8});
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,u_min,u_max,v_min,v_max,mass,err_inf,lyapunov,dissipation");

  CHECK(parse_snapshot_format("binary") == SnapshotFormat::Binary);
  CHECK_ERROR(parse_snapshot_format("png"), ErrorKind::ConfigError);
}
