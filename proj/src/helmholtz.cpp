#include "chemostab/helmholtz.hpp"

#include <algorithm>
#include <cmath>

#include "chemostab/error.hpp"

namespace chemostab {

namespace {
constexpr double kCgRelTol = 1e-12;
}

ScreenedLaplacian::ScreenedLaplacian(const GridDomain& grid, double shift, kernels::Exec exec)
    : grid_(grid), shape_(kernels::GridShape::of(grid)), shift_(shift), exec_(exec) {
  if (!(shift > 0.0) || !std::isfinite(shift))
    throw Error(ErrorKind::SingularOperator, "shift must be positive, got " + std::to_string(shift));
  if (grid.dimension() != 1) return;

  const int n = shape_.nx;
  const double ih2 = 1.0 / (shape_.hx * shape_.hx);
  off_diag_ = -ih2;
  upper_.resize(n);
  inv_pivot_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double neighbours = (i > 0 ? 1.0 : 0.0) + (i < n - 1 ? 1.0 : 0.0);
    const double diag = shift + neighbours * ih2;
    const double pivot = i == 0 ? diag : diag - off_diag_ * upper_[i - 1];
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = i < n - 1 ? off_diag_ * inv_pivot_[i] : 0.0;
  }
}

void ScreenedLaplacian::apply(std::span<const double> x, std::span<double> out) const {
  kernels::apply_shifted_laplacian(exec_, shape_, shift_, x, out);
}

Field ScreenedLaplacian::solve(std::span<const double> rhs) const {
  if (rhs.size() != grid_.size())
    throw Error(ErrorKind::NonFiniteInput, "right-hand side has wrong length");
  for (double r : rhs)
    if (!std::isfinite(r)) throw Error(ErrorKind::NonFiniteInput, "right-hand side is not finite");
  // Uniform rhs: the exact solution is rhs/shift, which elimination and CG only
  // reproduce up to rounding. Keeping it exact keeps constant states constant.
  if (std::all_of(rhs.begin(), rhs.end(), [&](double r) { return r == rhs[0]; }))
    return Field(rhs.size(), rhs[0] / shift_);
  Field x(rhs.size(), 0.0);
  if (grid_.dimension() == 1)
    solve_tridiagonal(rhs, x);
  else
    solve_cg(rhs, x);
  return x;
}

void ScreenedLaplacian::solve_tridiagonal(std::span<const double> rhs, std::span<double> x) const {
  const std::size_t n = rhs.size();
  x[0] = rhs[0] * inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - off_diag_ * x[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
}

void ScreenedLaplacian::solve_cg(std::span<const double> rhs, std::span<double> x) const {
  const std::size_t n = rhs.size();
  // Initial guess: rhs / shift is exact for constant data.
  for (std::size_t k = 0; k < n; ++k) x[k] = rhs[k] / shift_;

  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
  p = r;

  const double rhs_norm = std::sqrt(kernels::dot(exec_, rhs, rhs));
  if (rhs_norm == 0.0) return;
  double rr = kernels::dot(exec_, r, r);
  const int max_iter = static_cast<int>(10 * n) + 100;
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= kCgRelTol * rhs_norm) return;
    apply(p, ap);
    const double pap = kernels::dot(exec_, p, ap);
    if (!(pap > 0.0)) throw Error(ErrorKind::SolverFailure, "CG breakdown");
    const double step = rr / pap;
    kernels::axpy(exec_, step, p, x);
    kernels::axpy(exec_, -step, ap, r);
    const double rr_next = kernels::dot(exec_, r, r);
    kernels::xpay(exec_, r, rr_next / rr, p);
    rr = rr_next;
  }
  if (std::sqrt(rr) > kCgRelTol * rhs_norm * 100.0)
    throw Error(ErrorKind::SolverFailure, "CG did not converge");
}

HelmholtzOperator::HelmholtzOperator(const GridDomain& grid, double mu, kernels::Exec exec)
    : op_(grid, mu, exec) {}

Field solve_helmholtz(const HelmholtzOperator& op, std::span<const double> rhs) {
  return op.op().solve(rhs);
}

Field chemical_field(const HelmholtzOperator& op, const ModelParams& params,
                     std::span<const double> u) {
  Field rhs(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double uk = u[k];
    if (uk < 0.0) throw Error(ErrorKind::NonPositiveDensity, "negative density in chemical_field");
    rhs[k] = params.nu * (params.gamma == 1.0 ? uk : std::pow(uk, params.gamma));
  }
  return solve_helmholtz(op, rhs);
}

}  // namespace chemostab
