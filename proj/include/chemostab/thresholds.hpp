#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chemostab/model.hpp"
#include "chemostab/stability.hpp"

namespace chemostab {

/// Θ_β = β^β (1+β)^{−(1+β)}, with Θ_0 = 1.
double theta(double beta);

/// C_{α,γ} for (u^γ − u*^γ)² ≤ C u*^{2γ−α−1}(u − u*)(u^α − u*^α). Requires 2γ ≤ α + 1.
double power_diff_constant(double alpha, double gamma);

/// Same branch selection without the 2γ ≤ α + 1 check, for reporting flagged values.
double power_diff_constant_unchecked(double alpha, double gamma);

/// β̃ = [min(1, 2β − 1)]₊.
double tilde_beta(double beta);

/// χ_β = 2(2β − 1)/max{2, γN}; needs β ≥ 1.
double chi_beta_threshold(double beta, double gamma, int dimension);

/// The Calderón–Zygmund type constant p ↦ C*_{N,p}. Nobody knows these values in
/// closed form, so the source records whether a user actually supplied them.
struct CzConstant {
  std::function<double(double)> value;
  bool rigorous = false;
  std::string provenance;
};

/// Returns 1 for every p, flagged nonrigorous.
CzConstant cz_constant_stub();

/// Piecewise linear interpolation in a (p, value) table, clamped at the ends.
CzConstant cz_constant_table(std::vector<std::pair<double, double>> rows, std::string provenance);

/// Reads "p,value" rows (header line and # comments allowed).
CzConstant load_cz_constant_table(const std::string& path);

/// M*(N, p, μ, ν) = ν^p [(8^p/p) C*_{N,p} (2^p + μ^{−p}) + 2^{2p}/((p−1) p^p)], p > 1.
double m_star(int dimension, double p, double mu, double nu, const CzConstant* cz);

struct KStar {
  double value;
  double q_star;
  std::array<double, 3> ladder;  // q = q* + 1e-2, 1e-3, 1e-4
  bool converged;
};

double q_star(int dimension, double alpha);

/// liminf as q ↓ q* of M*(N, (q+α)/γ, μ, ν)^{γ/(q+α)}, approximated on a ladder.
KStar k_star(int dimension, double alpha, double gamma, double mu, double nu,
             const CzConstant* cz);

enum class ChiAbCase { I_III, II_IV };

std::string_view to_string(ChiAbCase c);

struct ChiAbBeta {
  double value;  // may be +inf
  ChiAbCase tag;
  double from_i_iii;
  double from_ii_iv;
};

/// max of the two piecewise boundedness thresholds. K* is needed only in the
/// equality cases with (Nα − 2)₊ > 0.
ChiAbBeta chi_ab_beta(const ModelParams& params, int dimension, std::optional<double> k_star);

/// bar χ_{a,b,β}: a/(2μΘ_{β−1}) for m = 1, b/(μΘ_{β−1}) for m > 1. Needs β ≥ 1.
double bar_chi(const ModelParams& params);

/// v̱_{a,b}, the eventual signal floor used by the second and fourth thresholds.
double underbar_v(const ModelParams& params);

enum class Provenance { UserSupplied, Empirical };

std::string_view to_string(Provenance p);

struct M0Value {
  double value;
  Provenance provenance;
};

struct AuxConstants {
  double theta_beta;
  double c_alpha_gamma;       // unchecked branch value when 2γ > α + 1
  bool c_alpha_gamma_valid;
  double tilde_beta;
  double ubar_v_ab;
  std::optional<double> bar_chi_ab_beta;  // only for β ≥ 1
  std::optional<M0Value> m0;
  std::optional<CzConstant> c_star_np;
  std::optional<KStar> k_star;
  double lambda_star;
};

/// Collects the constants for a logistic-model parameter set. K* is evaluated when a
/// C*_{N,p} source is given.
AuxConstants aux_constants(const ModelParams& params, const Equilibrium& eq, int dimension,
                           double lambda_star, std::optional<M0Value> m0,
                           std::optional<CzConstant> cz);

struct HypothesisCheck {
  std::string text;
  bool holds;
};

struct ThresholdEntry {
  double value;
  bool applicable;
  std::vector<HypothesisCheck> hypotheses;
};

/// χ**,1 .. χ**,4, each with its hypotheses evaluated. Requires a, b > 0.
std::array<ThresholdEntry, 4> chi_double_star(const ModelParams& params, const Equilibrium& eq,
                                              const AuxConstants& aux);

struct MinimalThresholds {
  double gamma_factor;                 // Γ_γ
  double chi_ss1;
  std::optional<double> chi_ss2;       // only when γ = 1
  double ubar0;
  double vlower0;
  Provenance inputs;
};

/// Γ_γ = u*^{γ−1} ū0 (γ ≤ 1) or γ ū0^γ (γ > 1).
double minimal_gamma_factor(double u_star, double gamma, double ubar0);

double minimal_chi_ss1(double u_star, double gamma, double beta, double mu, double nu,
                       int dimension, double lambda_star, double ubar0, double vlower0);

/// Throws GammaNotOne unless γ = 1.
double minimal_chi_ss2(double gamma, double beta, double mu, double nu, int dimension,
                       double ubar0, double vlower0);

MinimalThresholds minimal_thresholds(double u_star, double gamma, double beta, double mu,
                                     double nu, int dimension, double lambda_star, double ubar0,
                                     double vlower0, Provenance inputs);

/// Empirical lower bound for M_0: max over random smooth f with unit oscillation of
/// ‖∇_h w‖∞ √μ/ν where (μ − Δ_h) w = ν f.
double estimate_m0(const GridDomain& grid, double mu, double nu, std::size_t samples,
                   std::mt19937_64& rng);

struct ThresholdReport {
  std::optional<double> chi_beta;
  std::optional<ChiAbBeta> chi_ab_beta;
  double chi_star;
  int argmin_mode;
  std::optional<std::array<ThresholdEntry, 4>> chi_ss;
  std::optional<MinimalThresholds> minimal;
  std::optional<AuxConstants> aux;
  std::vector<std::string> notes;
};

struct ThresholdInputs {
  std::optional<M0Value> m0;
  std::optional<CzConstant> cz;
  // Minimal model: ū0, v̱0 measured or supplied.
  std::optional<double> ubar0;
  std::optional<double> vlower0;
  Provenance minimal_inputs = Provenance::UserSupplied;
};

ThresholdReport compute_thresholds(const ModelParams& params, const Equilibrium& eq,
                                   const GridDomain& grid, const ThresholdInputs& inputs);

// Ordering checks between the explicit thresholds and χ*.

enum class OrderingPart { First, Second, Third, Fourth, Minimal };

std::string_view to_string(OrderingPart part);

/// Hypotheses of each part as inequality text; empty when all hold.
std::vector<std::string> ordering_hypothesis_failures(OrderingPart part, const ModelParams& p);

struct OrderingSample {
  ModelParams params;
  double u_star;     // free parameter of the minimal model; ignored otherwise
  double ubar0;      // minimal model
  double vlower0;    // minimal model
  double length;     // interval length, sets λ*
  double m0;         // M_0 used for the third/fourth thresholds
  int dimension;
};

/// Draws a tuple meeting the hypotheses of the given part.
OrderingSample sample_ordering_tuple(OrderingPart part, std::mt19937_64& rng);

struct OrderingReport {
  OrderingPart part;
  std::size_t trials = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  std::vector<std::string> skip_reasons;
  std::vector<std::string> violation_tuples;
};

using OrderingGenerator = std::function<OrderingSample(std::mt19937_64&)>;

OrderingReport verify_orderings(OrderingPart part, std::size_t trials, std::mt19937_64& rng,
                                const OrderingGenerator& generator = {});

}  // namespace chemostab
