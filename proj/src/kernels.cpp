#include "chemostab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace chemostab::kernels {

GridShape GridShape::of(const GridDomain& grid) {
  return GridShape{grid.dimension(), grid.cells(0), grid.cells(1), grid.spacing(0),
                   grid.spacing(1)};
}

namespace {

// Below this many cells the OpenMP versions run on the calling thread.
constexpr std::size_t kParallelMin = 4096;

inline double pow_m(double x, double m) { return m == 1.0 ? x : std::pow(x, m); }

inline double sensitivity(const SensitivityCoeffs& s, double v_face) {
  return s.beta == 0.0 ? s.chi0 : s.chi0 * std::pow(1.0 + v_face, -s.beta);
}

// Per-element bodies shared by the serial and OpenMP loops.

inline double shifted_laplacian_at(const GridShape& g, double shift, std::span<const double> in,
                                   int i, int j) {
  const std::size_t c = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j;
  const double uc = in[c];
  const double ihx2 = 1.0 / (g.hx * g.hx);
  double acc = shift * uc;
  if (i > 0) acc += (uc - in[c - 1]) * ihx2;
  if (i < g.nx - 1) acc += (uc - in[c + 1]) * ihx2;
  if (g.dim == 2) {
    const double ihy2 = 1.0 / (g.hy * g.hy);
    if (j > 0) acc += (uc - in[c - g.nx]) * ihy2;
    if (j < g.ny - 1) acc += (uc - in[c + g.nx]) * ihy2;
  }
  return acc;
}

inline double face_value(const SensitivityCoeffs& s, double h, double u_l, double u_r, double v_l,
                         double v_r) {
  const double grad = (v_r - v_l) / h;
  const double drift = sensitivity(s, 0.5 * (v_l + v_r)) * grad;
  const double upwind = drift > 0.0 ? u_l : u_r;
  return drift * pow_m(upwind, s.m);
}

inline double x_face_at(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v, int i, int j) {
  if (i == 0 || i == g.nx) return 0.0;
  const std::size_t r = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j;
  return face_value(s, g.hx, u[r - 1], u[r], v[r - 1], v[r]);
}

inline double y_face_at(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v, int i, int j) {
  if (j == 0 || j == g.ny) return 0.0;
  const std::size_t r = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j;
  return face_value(s, g.hy, u[r - g.nx], u[r], v[r - g.nx], v[r]);
}

inline double divergence_at(const GridShape& g, const FaceFlux& f, int i, int j) {
  const std::size_t xf = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx + 1) * j;
  double d = (f.x[xf + 1] - f.x[xf]) / g.hx;
  if (g.dim == 2) {
    const std::size_t yf = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j;
    d += (f.y[yf + g.nx] - f.y[yf]) / g.hy;
  }
  return d;
}

inline double update_at(const ReactionCoeffs& r, double dt, double u, double div) {
  double reaction = r.a * u;
  if (r.b != 0.0) reaction -= r.b * u * std::pow(u, r.alpha);
  return u - dt * div + dt * reaction;
}

// Sum of |drift| u^{m-1} / h over faces whose drift leaves the cell.
inline double outflow_at(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                         std::span<const double> v, int i, int j) {
  const std::size_t c = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j;
  auto drift = [&](std::size_t l, std::size_t r, double h) {
    return sensitivity(s, 0.5 * (v[l] + v[r])) * (v[r] - v[l]) / h;
  };
  double rate = 0.0;
  if (i > 0) rate += std::max(0.0, -drift(c - 1, c, g.hx)) / g.hx;
  if (i < g.nx - 1) rate += std::max(0.0, drift(c, c + 1, g.hx)) / g.hx;
  if (g.dim == 2) {
    if (j > 0) rate += std::max(0.0, -drift(c - g.nx, c, g.hy)) / g.hy;
    if (j < g.ny - 1) rate += std::max(0.0, drift(c, c + g.nx, g.hy)) / g.hy;
  }
  return s.m == 1.0 ? rate : rate * std::pow(u[c], s.m - 1.0);
}

inline std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

template <class Term>
double block_partial(std::size_t block, std::size_t n, Term term) {
  const std::size_t lo = block * kReductionBlock;
  const std::size_t hi = std::min(n, lo + kReductionBlock);
  double acc = 0.0;
  for (std::size_t k = lo; k < hi; ++k) acc += term(k);
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Serial reference
// ---------------------------------------------------------------------------

namespace serial {

void apply_shifted_laplacian(const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out) {
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
          shifted_laplacian_at(g, shift, in, i, j);
}

void face_flux(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux) {
  flux.x.resize(g.x_faces());
  flux.y.resize(g.y_faces());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      flux.x[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx + 1) * j] =
          x_face_at(g, s, u, v, i, j);
  if (g.dim == 2)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        flux.y[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
            y_face_at(g, s, u, v, i, j);
}

void flux_divergence(const GridShape& g, const FaceFlux& flux, std::span<double> out) {
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
          divergence_at(g, flux, i, j);
}

void explicit_update(const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out) {
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = update_at(r, dt, u[k], div[k]);
}

double max_outflow_rate(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v) {
  double best = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) best = std::max(best, outflow_at(g, s, u, v, i, j));
  return best;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t b = 0; b < block_count(n); ++b)
    total += block_partial(b, n, [&](std::size_t k) { return x[k]; });
  return total;
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t b = 0; b < block_count(n); ++b)
    total += block_partial(b, n, [&](std::size_t k) { return x[k] * y[k]; });
  return total;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void xpay(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP
// ---------------------------------------------------------------------------

namespace omp {

void apply_shifted_laplacian(const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out) {
  const bool par = g.size() >= kParallelMin;
#pragma omp parallel for schedule(static) if (par)
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
          shifted_laplacian_at(g, shift, in, i, j);
}

void face_flux(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux) {
  flux.x.resize(g.x_faces());
  flux.y.resize(g.y_faces());
  const bool par = g.size() >= kParallelMin;
#pragma omp parallel if (par)
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        flux.x[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx + 1) * j] =
            x_face_at(g, s, u, v, i, j);
    if (g.dim == 2) {
#pragma omp for schedule(static)
      for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          flux.y[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
              y_face_at(g, s, u, v, i, j);
    }
  }
}

void flux_divergence(const GridShape& g, const FaceFlux& flux, std::span<double> out) {
  const bool par = g.size() >= kParallelMin;
#pragma omp parallel for schedule(static) if (par)
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
          divergence_at(g, flux, i, j);
}

void explicit_update(const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  const bool par = u.size() >= kParallelMin;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = update_at(r, dt, u[k], div[k]);
}

double max_outflow_rate(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v) {
  double best = 0.0;
  const bool par = g.size() >= kParallelMin;
#pragma omp parallel for schedule(static) reduction(max : best) if (par)
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) best = std::max(best, outflow_at(g, s, u, v, i, j));
  return best;
}

namespace {
template <class Term>
double blocked_sum(std::size_t n, Term term) {
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb);
  const std::ptrdiff_t nbi = static_cast<std::ptrdiff_t>(nb);
#pragma omp parallel for schedule(static) if (nb > 4)
  for (std::ptrdiff_t b = 0; b < nbi; ++b)
    partial[static_cast<std::size_t>(b)] = block_partial(static_cast<std::size_t>(b), n, term);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}
}  // namespace

double sum(std::span<const double> x) {
  return blocked_sum(x.size(), [&](std::size_t k) { return x[k]; });
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_sum(x.size(), [&](std::size_t k) { return x[k] * y[k]; });
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const bool par = x.size() >= kParallelMin;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void xpay(std::span<const double> x, double beta, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const bool par = x.size() >= kParallelMin;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace omp

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

void apply_shifted_laplacian(Exec e, const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out) {
  e == Exec::Serial ? serial::apply_shifted_laplacian(g, shift, in, out)
                    : omp::apply_shifted_laplacian(g, shift, in, out);
}

void face_flux(Exec e, const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux) {
  e == Exec::Serial ? serial::face_flux(g, s, u, v, flux) : omp::face_flux(g, s, u, v, flux);
}

void flux_divergence(Exec e, const GridShape& g, const FaceFlux& flux, std::span<double> out) {
  e == Exec::Serial ? serial::flux_divergence(g, flux, out) : omp::flux_divergence(g, flux, out);
}

void explicit_update(Exec e, const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out) {
  e == Exec::Serial ? serial::explicit_update(r, dt, u, div, out)
                    : omp::explicit_update(r, dt, u, div, out);
}

double max_outflow_rate(Exec e, const GridShape& g, const SensitivityCoeffs& s,
                        std::span<const double> u, std::span<const double> v) {
  return e == Exec::Serial ? serial::max_outflow_rate(g, s, u, v)
                           : omp::max_outflow_rate(g, s, u, v);
}

double sum(Exec e, std::span<const double> x) {
  return e == Exec::Serial ? serial::sum(x) : omp::sum(x);
}

double dot(Exec e, std::span<const double> x, std::span<const double> y) {
  return e == Exec::Serial ? serial::dot(x, y) : omp::dot(x, y);
}

void axpy(Exec e, double alpha, std::span<const double> x, std::span<double> y) {
  e == Exec::Serial ? serial::axpy(alpha, x, y) : omp::axpy(alpha, x, y);
}

void xpay(Exec e, std::span<const double> x, double beta, std::span<double> y) {
  e == Exec::Serial ? serial::xpay(x, beta, y) : omp::xpay(x, beta, y);
}

}  // namespace chemostab::kernels
