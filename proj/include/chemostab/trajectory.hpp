#pragma once

#include <cstddef>
#include <vector>

#include "chemostab/model.hpp"

namespace chemostab {

struct SummarySample {
  double t;
  double u_min;
  double u_max;
  double v_min;
  double v_max;
  double mass;
  double err_inf;
  double lyapunov;
  double dissipation;
};

struct Trajectory {
  Equilibrium eq{};
  std::vector<SummarySample> samples;
  std::vector<FieldState> snapshots;
  FieldState final_state;
  std::size_t steps = 0;
  std::size_t clip_count = 0;
};

}  // namespace chemostab
