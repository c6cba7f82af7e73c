#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemostab/integrator.hpp"
#include "chemostab/model.hpp"

namespace chemostab {

/// Flat key/value configuration. Text format:
///
///   # comment
///   chi0 = 3.5
///   [domain]            # later keys become domain.<key>
///   lengths = 3.14159265358979
///   cells = 256
///
/// Lists are comma separated. Unknown keys are rejected so typos do not pass silently.
class Config {
 public:
  static Config parse(std::string_view text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  /// Applies "key=value" on top of the current entries.
  void set(const std::string& key, const std::string& value);
  void set_assignment(std::string_view assignment);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> find_double(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Model coefficients; keys absent from the config keep the ModelParams defaults.
ModelParams params_from(const Config& cfg);

/// domain.dimension (1), domain.lengths (π), domain.cells (256).
GridDomain grid_from(const Config& cfg);

/// init.kind = constant | cosine | random | array. The random kind draws from
/// the supplied seed so repeated runs agree.
InitSpec init_from(const Config& cfg, const GridDomain& grid, const ModelParams& params,
                   std::uint64_t seed);

StepConfig step_from(const Config& cfg);

std::uint64_t seed_from(const Config& cfg);

}  // namespace chemostab
