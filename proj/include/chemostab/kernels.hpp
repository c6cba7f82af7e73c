#pragma once

// Data-parallel grid kernels. Each kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::omp; callers pick one via
// Exec. Reductions use fixed-size blocks summed in index order, so both
// versions return bit-identical results for any thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "chemostab/model.hpp"

namespace chemostab::kernels {

enum class Exec { Serial, Parallel };

struct GridShape {
  int dim;
  int nx;
  int ny;
  double hx;
  double hy;

  static GridShape of(const GridDomain& grid);
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t x_faces() const { return static_cast<std::size_t>(nx + 1) * ny; }
  std::size_t y_faces() const { return dim == 2 ? static_cast<std::size_t>(nx) * (ny + 1) : 0; }
};

/// Chemotactic flux on faces. x-face (i, j) sits left of cell (i, j): index i + (nx+1) j.
/// y-face (i, j) sits below cell (i, j): index i + nx j.
struct FaceFlux {
  std::vector<double> x;
  std::vector<double> y;
};

struct SensitivityCoeffs {
  double chi0;
  double beta;
  double m;
};

struct ReactionCoeffs {
  double a;
  double b;
  double alpha;
};

inline constexpr std::size_t kReductionBlock = 1024;

namespace serial {
void apply_shifted_laplacian(const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out);
void face_flux(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux);
void flux_divergence(const GridShape& g, const FaceFlux& flux, std::span<double> out);
void explicit_update(const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out);
double max_outflow_rate(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v);
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double beta, std::span<double> y);
}  // namespace serial

namespace omp {
void apply_shifted_laplacian(const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out);
void face_flux(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux);
void flux_divergence(const GridShape& g, const FaceFlux& flux, std::span<double> out);
void explicit_update(const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out);
double max_outflow_rate(const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
                        std::span<const double> v);
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double beta, std::span<double> y);
}  // namespace omp

// Dispatchers.
void apply_shifted_laplacian(Exec e, const GridShape& g, double shift, std::span<const double> in,
                             std::span<double> out);
void face_flux(Exec e, const GridShape& g, const SensitivityCoeffs& s, std::span<const double> u,
               std::span<const double> v, FaceFlux& flux);
void flux_divergence(Exec e, const GridShape& g, const FaceFlux& flux, std::span<double> out);
void explicit_update(Exec e, const ReactionCoeffs& r, double dt, std::span<const double> u,
                     std::span<const double> div, std::span<double> out);
double max_outflow_rate(Exec e, const GridShape& g, const SensitivityCoeffs& s,
                        std::span<const double> u, std::span<const double> v);
double sum(Exec e, std::span<const double> x);
double dot(Exec e, std::span<const double> x, std::span<const double> y);
void axpy(Exec e, double alpha, std::span<const double> x, std::span<double> y);
void xpay(Exec e, std::span<const double> x, double beta, std::span<double> y);

}  // namespace chemostab::kernels
