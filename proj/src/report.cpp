#include "chemostab/report.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "chemostab/error.hpp"

namespace chemostab {

Json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const ModelParams& p) {
  return Json{{"chi0", p.chi0}, {"beta", p.beta}, {"m", p.m},   {"alpha", p.alpha},
              {"gamma", p.gamma}, {"a", p.a},     {"b", p.b},   {"mu", p.mu},
              {"nu", p.nu}};
}

Json to_json(const StabilityReport& r) {
  Json table = Json::array();
  for (const auto& e : r.sigma_table)
    table.push_back(Json{{"n", e.n}, {"lambda", e.lambda}, {"sigma", e.sigma}});
  return Json{{"chi_star", number_json(r.chi_star)},
              {"argmin_mode", r.argmin_mode},
              {"regime", std::string(to_string(r.regime))},
              {"predicted_rate", number_json(r.predicted_rate)},
              {"sigma_table", table}};
}

namespace {

Json entry_json(const ThresholdEntry& e) {
  Json hyps = Json::array();
  for (const auto& h : e.hypotheses) hyps.push_back(Json{{"text", h.text}, {"holds", h.holds}});
  return Json{{"value", number_json(e.value)}, {"applicable", e.applicable}, {"hypotheses", hyps}};
}

}  // namespace

Json to_json(const ThresholdReport& r) {
  Json j;
  j["chi_beta"] = r.chi_beta ? number_json(*r.chi_beta) : Json(nullptr);
  if (r.chi_ab_beta)
    j["chi_ab_beta"] = Json{{"value", number_json(r.chi_ab_beta->value)},
                            {"case", std::string(to_string(r.chi_ab_beta->tag))},
                            {"from_i_iii", number_json(r.chi_ab_beta->from_i_iii)},
                            {"from_ii_iv", number_json(r.chi_ab_beta->from_ii_iv)}};
  else
    j["chi_ab_beta"] = nullptr;
  j["chi_star"] = number_json(r.chi_star);
  j["argmin_mode"] = r.argmin_mode;
  if (r.chi_ss) {
    Json arr = Json::array();
    for (const auto& e : *r.chi_ss) arr.push_back(entry_json(e));
    j["chi_ss"] = arr;
  } else {
    j["chi_ss"] = nullptr;
  }
  if (r.minimal) {
    j["minimal"] = Json{{"chi_ss1_min", number_json(r.minimal->chi_ss1)},
                        {"chi_ss2_min", r.minimal->chi_ss2 ? number_json(*r.minimal->chi_ss2)
                                                           : Json(nullptr)},
                        {"gamma_factor", number_json(r.minimal->gamma_factor)},
                        {"empirical_inputs", Json{{"ubar0", r.minimal->ubar0},
                                                  {"vlower0", r.minimal->vlower0},
                                                  {"provenance", std::string(to_string(
                                                                     r.minimal->inputs))}}}};
  } else {
    j["minimal"] = nullptr;
  }
  if (r.aux) {
    const auto& a = *r.aux;
    Json aux{{"theta_beta", number_json(a.theta_beta)},
             {"c_alpha_gamma", number_json(a.c_alpha_gamma)},
             {"c_alpha_gamma_valid", a.c_alpha_gamma_valid},
             {"tilde_beta", number_json(a.tilde_beta)},
             {"ubar_v_ab", number_json(a.ubar_v_ab)},
             {"bar_chi_ab_beta", a.bar_chi_ab_beta ? number_json(*a.bar_chi_ab_beta)
                                                   : Json(nullptr)},
             {"lambda_star", number_json(a.lambda_star)}};
    aux["m0"] = a.m0 ? Json{{"value", a.m0->value},
                            {"provenance", std::string(to_string(a.m0->provenance))}}
                     : Json(nullptr);
    aux["c_star_np"] = a.c_star_np ? Json{{"provenance", a.c_star_np->provenance},
                                          {"rigorous", a.c_star_np->rigorous}}
                                   : Json(nullptr);
    if (a.k_star)
      aux["k_star"] = Json{{"value", number_json(a.k_star->value)},
                           {"q_star", a.k_star->q_star},
                           {"ladder", Json::array({number_json(a.k_star->ladder[0]),
                                                   number_json(a.k_star->ladder[1]),
                                                   number_json(a.k_star->ladder[2])})},
                           {"converged", a.k_star->converged}};
    else
      aux["k_star"] = nullptr;
    j["aux"] = aux;
  }
  j["notes"] = r.notes;
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : traj.samples)
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", format_double(s.t), format_double(s.u_min),
                       format_double(s.u_max), format_double(s.v_min), format_double(s.v_max),
                       format_double(s.mass), format_double(s.err_inf),
                       format_double(s.lyapunov), format_double(s.dissipation));
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k)
    out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

SnapshotFormat parse_snapshot_format(const std::string& text) {
  if (text == "none") return SnapshotFormat::None;
  if (text == "csv") return SnapshotFormat::Csv;
  if (text == "binary") return SnapshotFormat::Binary;
  throw Error(ErrorKind::ConfigError, "output.snapshots must be none, csv or binary");
}

void write_snapshots(const std::string& stem, const Trajectory& traj, SnapshotFormat format) {
  if (format == SnapshotFormat::None || traj.snapshots.empty()) return;
  if (format == SnapshotFormat::Csv) {
    std::ostringstream u, v;
    for (const auto& s : traj.snapshots) {
      u << format_double(s.time);
      v << format_double(s.time);
      for (double x : s.u) u << ',' << format_double(x);
      for (double x : s.v) v << ',' << format_double(x);
      u << '\n';
      v << '\n';
    }
    write_file(stem + "_u.csv", u.str());
    write_file(stem + "_v.csv", v.str());
    return;
  }
  std::string bytes;
  auto put = [&](const void* data, std::size_t n) {
    bytes.append(static_cast<const char*>(data), n);
  };
  const std::uint64_t cells = traj.snapshots.front().u.size();
  put(&cells, sizeof cells);
  for (const auto& s : traj.snapshots) {
    put(&s.time, sizeof s.time);
    put(s.u.data(), s.u.size() * sizeof(double));
    put(s.v.data(), s.v.size() * sizeof(double));
  }
  write_file(stem + "_fields.bin", bytes);
}

}  // namespace chemostab
