#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "chemostab/model.hpp"
#include "chemostab/stability.hpp"
#include "chemostab/thresholds.hpp"
#include "chemostab/trajectory.hpp"

namespace chemostab {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; ±inf and NaN as the strings "inf", "-inf", "nan".
Json number_json(double x);

Json to_json(const ModelParams& p);
Json to_json(const StabilityReport& r);
Json to_json(const ThresholdReport& r);

/// Round-trip text for a double (17 significant digits, "inf" for infinity).
std::string format_double(double x);

inline const char* kTrajectoryHeader =
    "t,u_min,u_max,v_min,v_max,mass,err_inf,lyapunov,dissipation";

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);

/// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

enum class SnapshotFormat { None, Csv, Binary };

SnapshotFormat parse_snapshot_format(const std::string& text);

/// CSV: one row per snapshot "t,u_0..u_{n-1}" then the same for v in a second file.
/// Binary: little-endian doubles, per snapshot [t, u..., v...], file prefixed by the cell count.
void write_snapshots(const std::string& stem, const Trajectory& traj, SnapshotFormat format);

}  // namespace chemostab
