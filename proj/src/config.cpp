#include "chemostab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "chemostab/error.hpp"

namespace chemostab {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "chi0", "beta", "m", "alpha", "gamma", "a", "b", "mu", "nu", "u_star", "seed",
      "domain.dimension", "domain.lengths", "domain.cells",
      "init.kind", "init.value", "init.u_star", "init.epsilon", "init.mode_x", "init.mode_y",
      "init.file", "init.mean", "init.amplitude",
      "time.t_end", "time.dt", "time.cfl", "time.dt_max", "time.policy", "time.output_stride",
      "time.blowup_cap", "time.positivity_floor", "time.exec",
      "output.dir", "output.name", "output.snapshots", "output.snapshot_stride",
      "thresholds.m0", "thresholds.m0_samples", "thresholds.c_star_table",
      "minimal.ubar0", "minimal.vlower0", "minimal.calibration_time",
      "rectangle.t_end", "rectangle.dt", "rectangle.slack",
      "scenario.chi0_fraction",
  };
  return keys;
}

bool key_allowed(const std::string& key) {
  return known_keys().count(key) != 0 || key.rfind("sweep.", 0) == 0;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "pi") return std::numbers::pi;
  double value = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::ConfigError, "key '" + key + "': '" + t + "' is not a number");
  return value;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& origin) {
  Config cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(number) +
                                                ": unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError,
                  origin + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    cfg.set(key, trim(std::string_view(body).substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!key_allowed(key)) throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
  entries_[key] = value;
}

void Config::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorKind::ConfigError, "override must look like key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::optional<double> Config::find_double(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return to_double(key, it->second);
}

double Config::get_double(const std::string& key, double fallback) const {
  return find_double(key).value_or(fallback);
}

long Config::get_int(const std::string& key, long fallback) const {
  const auto v = find_double(key);
  if (!v) return fallback;
  if (*v != std::floor(*v))
    throw Error(ErrorKind::ConfigError, "key '" + key + "' must be an integer");
  return static_cast<long>(*v);
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  const auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

ModelParams params_from(const Config& cfg) {
  ModelParams p;
  p.chi0 = cfg.get_double("chi0", p.chi0);
  p.beta = cfg.get_double("beta", p.beta);
  p.m = cfg.get_double("m", p.m);
  p.alpha = cfg.get_double("alpha", p.alpha);
  p.gamma = cfg.get_double("gamma", p.gamma);
  p.a = cfg.get_double("a", p.a);
  p.b = cfg.get_double("b", p.b);
  p.mu = cfg.get_double("mu", p.mu);
  p.nu = cfg.get_double("nu", p.nu);
  return validate_params(p);
}

GridDomain grid_from(const Config& cfg) {
  const long dim = cfg.get_int("domain.dimension", 1);
  auto lengths = cfg.get_list("domain.lengths");
  auto cells = cfg.get_list("domain.cells");
  if (lengths.empty()) lengths.assign(static_cast<std::size_t>(std::max(dim, 1L)), std::numbers::pi);
  if (cells.empty()) cells.assign(static_cast<std::size_t>(std::max(dim, 1L)), 256.0);
  auto as_int = [](double x) {
    if (x != std::floor(x) || x < 1.0)
      throw Error(ErrorKind::ConfigError, "domain.cells entries must be positive integers");
    return static_cast<int>(x);
  };
  if (dim == 1) {
    if (lengths.size() != 1 || cells.size() != 1)
      throw Error(ErrorKind::ConfigError, "1D domain needs one length and one cell count");
    return GridDomain::interval(lengths[0], as_int(cells[0]));
  }
  if (dim == 2) {
    if (lengths.size() != 2 || cells.size() != 2)
      throw Error(ErrorKind::ConfigError, "2D domain needs two lengths and two cell counts");
    return GridDomain::rectangle(lengths[0], lengths[1], as_int(cells[0]), as_int(cells[1]));
  }
  throw Error(ErrorKind::InvalidDomain, "domain.dimension must be 1 or 2");
}

InitSpec init_from(const Config& cfg, const GridDomain& grid, const ModelParams& params,
                   std::uint64_t seed) {
  const std::string kind = cfg.get_string("init.kind", "cosine");
  const double default_level =
      params.is_minimal() ? cfg.get_double("u_star", 1.0)
                          : std::pow(params.a / params.b, 1.0 / params.alpha);
  if (kind == "constant") return ConstantInit{cfg.get_double("init.value", default_level)};
  if (kind == "cosine") {
    CosineInit c{cfg.get_double("init.u_star", default_level), cfg.get_double("init.epsilon", 0.01)};
    c.mode_x = static_cast<int>(cfg.get_int("init.mode_x", 1));
    c.mode_y = static_cast<int>(cfg.get_int("init.mode_y", 0));
    return c;
  }
  if (kind == "random") {
    const double mean = cfg.get_double("init.mean", default_level);
    const double amp = cfg.get_double("init.amplitude", 0.1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field u(grid.size());
    for (double& x : u) x = mean * (1.0 + amp * unit(rng));
    return ArrayInit{std::move(u)};
  }
  if (kind == "array") {
    const std::string path = cfg.get_string("init.file", "");
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open init.file '" + path + "'");
    Field u;
    std::string token;
    while (in >> token) {
      std::replace(token.begin(), token.end(), ',', ' ');
      std::istringstream parts(token);
      std::string piece;
      while (parts >> piece) u.push_back(to_double("init.file", piece));
    }
    return ArrayInit{std::move(u)};
  }
  throw Error(ErrorKind::ConfigError, "init.kind must be constant, cosine, random or array");
}

StepConfig step_from(const Config& cfg) {
  StepConfig s;
  const std::string policy = cfg.get_string("time.policy", "adaptive");
  if (policy == "fixed")
    s.policy = DtPolicy::Fixed;
  else if (policy != "adaptive")
    throw Error(ErrorKind::ConfigError, "time.policy must be fixed or adaptive");
  s.dt = cfg.get_double("time.dt", s.dt);
  s.cfl = cfg.get_double("time.cfl", s.cfl);
  s.dt_max = cfg.get_double("time.dt_max", s.dt_max);
  s.t_end = cfg.get_double("time.t_end", s.t_end);
  s.output_stride = static_cast<int>(cfg.get_int("time.output_stride", s.output_stride));
  s.blowup_cap = cfg.get_double("time.blowup_cap", s.blowup_cap);
  s.positivity_floor = cfg.get_double("time.positivity_floor", s.positivity_floor);
  s.snapshot_stride = static_cast<int>(cfg.get_int("output.snapshot_stride", 0));
  const std::string exec = cfg.get_string("time.exec", "parallel");
  if (exec == "serial")
    s.exec = kernels::Exec::Serial;
  else if (exec != "parallel")
    throw Error(ErrorKind::ConfigError, "time.exec must be serial or parallel");
  validate_step_config(s);
  return s;
}

std::uint64_t seed_from(const Config& cfg) {
  const long s = cfg.get_int("seed", 1);
  if (s < 0) throw Error(ErrorKind::ConfigError, "seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

}  // namespace chemostab
