#include "chemostab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chemostab/error.hpp"
#include "chemostab/helmholtz.hpp"

namespace chemostab {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorKind::NonPositiveCoefficient,
                std::string(name) + " must be positive, got " + std::to_string(value));
}

}  // namespace

ModelParams validate_params(const ModelParams& raw) {
  require_positive(raw.mu, "mu");
  require_positive(raw.nu, "nu");
  require_positive(raw.alpha, "alpha");
  require_positive(raw.gamma, "gamma");
  if (!std::isfinite(raw.chi0))
    throw Error(ErrorKind::NonPositiveCoefficient, "chi0 must be finite");
  if (!(raw.beta >= 0.0))
    throw Error(ErrorKind::NonPositiveCoefficient, "beta must be non-negative");
  if (!(raw.a >= 0.0) || !(raw.b >= 0.0))
    throw Error(ErrorKind::NonPositiveCoefficient, "a and b must be non-negative");
  if (!(raw.m >= 1.0))
    throw Error(ErrorKind::MIsBelowOne, "m must be at least 1, got " + std::to_string(raw.m));
  if ((raw.a == 0.0) != (raw.b == 0.0))
    throw Error(ErrorKind::MixedLogistic, "a and b must both vanish or both be positive");
  return raw;
}

GridDomain GridDomain::interval(double length, int cells) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(ErrorKind::InvalidDomain, "interval length must be positive");
  if (cells < 8) throw Error(ErrorKind::InvalidDomain, "need at least 8 cells per axis");
  return GridDomain(1, {length, 1.0}, {cells, 1});
}

GridDomain GridDomain::rectangle(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw Error(ErrorKind::InvalidDomain, "rectangle side lengths must be positive");
  if (nx < 8 || ny < 8) throw Error(ErrorKind::InvalidDomain, "need at least 8 cells per axis");
  return GridDomain(2, {lx, ly}, {nx, ny});
}

double GridDomain::min_spacing() const {
  return dim_ == 1 ? spacing(0) : std::min(spacing(0), spacing(1));
}

Equilibrium equilibrium(const ModelParams& params, std::optional<double> u_star) {
  double u;
  if (params.is_minimal()) {
    if (!u_star)
      throw Error(ErrorKind::MissingFreeParameter, "minimal model needs an explicit u*");
    if (!(*u_star > 0.0))
      throw Error(ErrorKind::MissingFreeParameter, "u* must be positive");
    u = *u_star;
  } else {
    if (u_star)
      throw Error(ErrorKind::MissingFreeParameter,
                  "u* is determined by a and b; do not pass it for the logistic model");
    u = std::pow(params.a / params.b, 1.0 / params.alpha);
  }
  return Equilibrium{u, params.nu / params.mu * std::pow(u, params.gamma)};
}

SpectrumTable neumann_eigenvalues(const GridDomain& domain, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::SpectrumTooShort, "n_max must be at least 1");
  const double kx = std::numbers::pi / domain.length(0);
  SpectrumTable table;
  if (domain.dimension() == 1) {
    for (int n = 0; n <= n_max; ++n) {
      table.eigenvalues.push_back((n * kx) * (n * kx));
      table.modes.push_back({n, 0});
    }
    return table;
  }

  // Enumerate (j, k) below a bound holding at least n_max + 1 lattice points. The
  // quarter-disc area estimate starts close; doubling covers the boundary deficit.
  const double ky = std::numbers::pi / domain.length(1);
  const std::size_t wanted = static_cast<std::size_t>(n_max) + 1;
  double bound = 4.0 * wanted * kx * ky / std::numbers::pi + kx * kx + ky * ky;
  std::vector<std::pair<double, NeumannMode>> all;
  for (;;) {
    all.clear();
    for (int j = 0; (j * kx) * (j * kx) <= bound; ++j)
      for (int k = 0; (j * kx) * (j * kx) + (k * ky) * (k * ky) <= bound; ++k)
        all.push_back({(j * kx) * (j * kx) + (k * ky) * (k * ky), NeumannMode{j, k}});
    if (all.size() >= wanted) break;
    bound *= 2.0;
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first < r.first;
    return l.second.jx != r.second.jx ? l.second.jx < r.second.jx : l.second.jy < r.second.jy;
  });
  all.resize(static_cast<std::size_t>(n_max) + 1);
  for (const auto& [lambda, mode] : all) {
    table.eigenvalues.push_back(lambda);
    table.modes.push_back(mode);
  }
  return table;
}

FieldState init_state(const GridDomain& domain, const ModelParams& params, const InitSpec& spec) {
  const std::size_t n = domain.size();
  Field u(n);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantInit>) {
          std::fill(u.begin(), u.end(), s.value);
        } else if constexpr (std::is_same_v<T, CosineInit>) {
          const double kx = s.mode_x * std::numbers::pi / domain.length(0);
          const double ky =
              domain.dimension() == 2 ? s.mode_y * std::numbers::pi / domain.length(1) : 0.0;
          for (int j = 0; j < domain.cells(1); ++j)
            for (int i = 0; i < domain.cells(0); ++i) {
              const double shape = std::cos(kx * domain.center(0, i)) *
                                   (domain.dimension() == 2 ? std::cos(ky * domain.center(1, j)) : 1.0);
              u[static_cast<std::size_t>(i) + static_cast<std::size_t>(domain.cells(0)) * j] =
                  s.u_star * (1.0 + s.epsilon * shape);
            }
        } else {
          if (s.values.size() != n)
            throw Error(ErrorKind::NonPositiveInitialData,
                        "initial array has " + std::to_string(s.values.size()) +
                            " entries, grid has " + std::to_string(n));
          u = s.values;
        }
      },
      spec);

  for (double x : u)
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(ErrorKind::NonPositiveInitialData, "initial density must be strictly positive");

  const HelmholtzOperator op(domain, params.mu);
  FieldState state;
  state.time = 0.0;
  state.v = chemical_field(op, params, u);
  state.u = std::move(u);
  return state;
}

}  // namespace chemostab
