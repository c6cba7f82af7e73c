#pragma once

#include <span>
#include <vector>

#include "chemostab/kernels.hpp"
#include "chemostab/model.hpp"

namespace chemostab {

/// Solver for (s I − Δ_h) x = rhs with the mirror-ghost Neumann stencil.
///
/// 1D grids are factored once (tridiagonal elimination); 2D grids use
/// conjugate gradients to a relative residual of 1e-12. The object is
/// immutable after construction, so concurrent solves are safe.
class ScreenedLaplacian {
 public:
  ScreenedLaplacian(const GridDomain& grid, double shift,
                    kernels::Exec exec = kernels::Exec::Parallel);

  Field solve(std::span<const double> rhs) const;
  void apply(std::span<const double> x, std::span<double> out) const;

  const GridDomain& grid() const { return grid_; }
  double shift() const { return shift_; }
  kernels::Exec exec() const { return exec_; }

 private:
  void solve_tridiagonal(std::span<const double> rhs, std::span<double> x) const;
  void solve_cg(std::span<const double> rhs, std::span<double> x) const;

  GridDomain grid_;
  kernels::GridShape shape_;
  double shift_;
  kernels::Exec exec_;
  // Thomas factors: modified super-diagonal and inverse pivots.
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
  double off_diag_ = 0.0;
};

/// (μ − Δ_h), prefactored once per (grid, μ).
class HelmholtzOperator {
 public:
  HelmholtzOperator(const GridDomain& grid, double mu,
                    kernels::Exec exec = kernels::Exec::Parallel);

  const ScreenedLaplacian& op() const { return op_; }
  const GridDomain& grid() const { return op_.grid(); }
  double mu() const { return op_.shift(); }

 private:
  ScreenedLaplacian op_;
};

/// v with (μ − Δ_h) v = rhs.
Field solve_helmholtz(const HelmholtzOperator& op, std::span<const double> rhs);

/// Signal slaved to u: (μ − Δ_h) v = ν u^γ.
Field chemical_field(const HelmholtzOperator& op, const ModelParams& params,
                     std::span<const double> u);

}  // namespace chemostab
