#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace chemostab {

using Field = std::vector<double>;

/// Coefficients of u_t = Δu − ∇·(u^m χ0 (1+v)^{−β} ∇v) + au − bu^{1+α},
/// 0 = Δv − μv + νu^γ.
struct ModelParams {
  double chi0 = 0.0;
  double beta = 0.0;
  double m = 1.0;
  double alpha = 1.0;
  double gamma = 1.0;
  double a = 1.0;
  double b = 1.0;
  double mu = 1.0;
  double nu = 1.0;

  /// a = b = 0: mass is conserved and u* is a free parameter.
  bool is_minimal() const { return a == 0.0 && b == 0.0; }
};

/// Checks coefficient signs and the logistic pairing; returns the accepted record.
ModelParams validate_params(const ModelParams& raw);

/// Cell-centered grid on [0,Lx] (1D) or [0,Lx]x[0,Ly] (2D).
/// Cell (i, j) has linear index i + nx * j.
class GridDomain {
 public:
  static GridDomain interval(double length, int cells);
  static GridDomain rectangle(double lx, double ly, int nx, int ny);

  int dimension() const { return dim_; }
  double length(int axis) const { return lengths_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / cells_[axis]; }
  std::size_t size() const {
    return static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(cells_[1]);
  }
  double volume() const { return lengths_[0] * lengths_[1]; }
  double cell_volume() const { return spacing(0) * spacing(1); }
  double center(int axis, int index) const { return (index + 0.5) * spacing(axis); }
  double min_spacing() const;

 private:
  GridDomain(int dim, std::array<double, 2> lengths, std::array<int, 2> cells)
      : dim_(dim), lengths_(lengths), cells_(cells) {}

  int dim_;
  // Unused second axis of a 1D grid is (1.0, 1 cell) so volume/size formulas stay uniform.
  std::array<double, 2> lengths_;
  std::array<int, 2> cells_;
};

struct Equilibrium {
  double u_star;
  double v_star;
};

/// (u*, v*) for the logistic model; the minimal model needs u* supplied.
Equilibrium equilibrium(const ModelParams& params, std::optional<double> u_star = std::nullopt);

struct NeumannMode {
  int jx;
  int jy;
};

/// Analytic eigenvalues of −Δ with Neumann conditions, ascending, λ_0 = 0.
struct SpectrumTable {
  std::vector<double> eigenvalues;
  std::vector<NeumannMode> modes;

  double lambda_star() const { return eigenvalues.at(1); }
  std::size_t size() const { return eigenvalues.size(); }
};

/// First n_max + 1 eigenvalues of the interval / rectangle.
SpectrumTable neumann_eigenvalues(const GridDomain& domain, int n_max);

struct FieldState {
  double time = 0.0;
  Field u;
  Field v;
};

struct ConstantInit {
  double value;
};

/// u = u* (1 + ε cos(jx π x / Lx) cos(jy π y / Ly)).
struct CosineInit {
  double u_star;
  double epsilon;
  int mode_x = 1;
  int mode_y = 0;
};

struct ArrayInit {
  Field values;
};

using InitSpec = std::variant<ConstantInit, CosineInit, ArrayInit>;

/// Builds u from the descriptor and solves for the matching signal v.
FieldState init_state(const GridDomain& domain, const ModelParams& params, const InitSpec& spec);

}  // namespace chemostab
