#include "chemostab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "chemostab/error.hpp"
#include "chemostab/helmholtz.hpp"

namespace chemostab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Exact-equality tests on exponents coming from user input; a relative 1e-12 band
// absorbs decimal round-off such as 0.1 + 0.2.
bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double theta(double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorKind::NonPositiveCoefficient, "theta needs beta >= 0");
  if (beta == 0.0) return 1.0;
  // β^β (1+β)^{−(1+β)} in log form to stay finite for large β.
  return std::exp(beta * std::log(beta) - (1.0 + beta) * std::log1p(beta));
}

double power_diff_constant_unchecked(double alpha, double gamma) {
  if (alpha < 1.0) return (alpha + 1.0) * (alpha + 1.0) / (4.0 * alpha);
  if (gamma <= 1.0) return 1.0;
  return gamma * gamma / (2.0 * gamma - 1.0);
}

double power_diff_constant(double alpha, double gamma) {
  if (!(alpha > 0.0) || !(gamma > 0.0))
    throw Error(ErrorKind::NonPositiveCoefficient, "alpha and gamma must be positive");
  if (2.0 * gamma > alpha + 1.0)
    throw Error(ErrorKind::HypothesisViolated,
                fmt::format("2*gamma <= alpha + 1 fails for alpha={}, gamma={}", alpha, gamma));
  return power_diff_constant_unchecked(alpha, gamma);
}

double tilde_beta(double beta) { return positive_part(std::min(1.0, 2.0 * beta - 1.0)); }

double chi_beta_threshold(double beta, double gamma, int dimension) {
  if (beta < 1.0) throw Error(ErrorKind::BetaBelowOne, fmt::format("beta = {} < 1", beta));
  return 2.0 * (2.0 * beta - 1.0) / std::max(2.0, gamma * dimension);
}

CzConstant cz_constant_stub() {
  return CzConstant{[](double) { return 1.0; }, false, "stub C*=1 (nonrigorous)"};
}

CzConstant cz_constant_table(std::vector<std::pair<double, double>> rows, std::string provenance) {
  if (rows.empty()) throw Error(ErrorKind::MissingCZConstant, "empty C* table");
  std::sort(rows.begin(), rows.end());
  for (const auto& [p, v] : rows)
    if (!(v > 0.0)) throw Error(ErrorKind::MissingCZConstant, "C* values must be positive");
  auto fn = [rows = std::move(rows)](double p) {
    if (p <= rows.front().first) return rows.front().second;
    if (p >= rows.back().first) return rows.back().second;
    auto hi = std::upper_bound(rows.begin(), rows.end(), std::pair{p, kInf});
    auto lo = hi - 1;
    const double w = (p - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  };
  return CzConstant{fn, true, std::move(provenance)};
}

CzConstant load_cz_constant_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open C* table " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double p, v;
    if (!(fields >> p >> v)) {
      if (rows.empty()) continue;  // header
      throw Error(ErrorKind::ConfigError, "bad C* table row: " + line);
    }
    rows.emplace_back(p, v);
  }
  return cz_constant_table(std::move(rows), "table " + path);
}

double m_star(int dimension, double p, double mu, double nu, const CzConstant* cz) {
  (void)dimension;  // the dimension enters only through the supplied C*_{N,p}
  if (cz == nullptr || !cz->value)
    throw Error(ErrorKind::MissingCZConstant, "M* needs the constant C*_{N,p}");
  if (!(p > 1.0)) throw Error(ErrorKind::HypothesisViolated, "M* needs p > 1");
  const double c = cz->value(p);
  if (!(c > 0.0)) throw Error(ErrorKind::MissingCZConstant, "C*_{N,p} must be positive");
  return std::pow(nu, p) * (std::pow(8.0, p) / p * c * (std::pow(2.0, p) + std::pow(mu, -p)) +
                            std::pow(2.0, 2.0 * p) / ((p - 1.0) * std::pow(p, p)));
}

double q_star(int dimension, double alpha) { return std::max(1.0, dimension * alpha / 2.0); }

KStar k_star(int dimension, double alpha, double gamma, double mu, double nu,
             const CzConstant* cz) {
  KStar out{};
  out.q_star = q_star(dimension, alpha);
  const std::array<double, 3> eps{1e-2, 1e-3, 1e-4};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double q = out.q_star + eps[k];
    const double p = (q + alpha) / gamma;
    out.ladder[k] = std::pow(m_star(dimension, p, mu, nu, cz), gamma / (q + alpha));
  }
  out.value = out.ladder[2];
  out.converged = std::abs(out.ladder[2] - out.ladder[1]) <= 1e-3 * std::abs(out.ladder[2]);
  return out;
}

std::string_view to_string(ChiAbCase c) { return c == ChiAbCase::I_III ? "(i,iii)" : "(ii,iv)"; }

ChiAbBeta chi_ab_beta(const ModelParams& p, int dimension, std::optional<double> k_star) {
  const double n_alpha = positive_part(dimension * p.alpha - 2.0);
  auto need_k = [&]() {
    if (!k_star)
      throw Error(ErrorKind::MissingKStar, "equality case of the boundedness threshold needs K*");
    return *k_star;
  };

  double first;
  const double edge1 = p.m + p.gamma - 1.0;
  if (nearly_equal(p.alpha, edge1)) {
    if (n_alpha == 0.0)
      first = kInf;
    else {
      const double k = p.beta == 0.0 ? 0.0 : need_k();
      first = (n_alpha + 2.0 * p.m) * p.b / (n_alpha * (p.nu + p.beta * theta(p.beta) * k));
    }
  } else {
    first = p.alpha > edge1 ? kInf : 0.0;
  }

  double second;
  const double edge2 = 2.0 * p.m + p.gamma - 2.0;
  if (p.beta < 0.5) {
    second = 0.0;
  } else if (nearly_equal(p.alpha, edge2)) {
    second = n_alpha == 0.0
                 ? kInf
                 : std::sqrt(8.0 * p.b / (n_alpha * theta(2.0 * p.beta - 1.0) * need_k()));
  } else {
    second = p.alpha > edge2 ? kInf : 0.0;
  }

  return {std::max(first, second), first >= second ? ChiAbCase::I_III : ChiAbCase::II_IV, first,
          second};
}

double bar_chi(const ModelParams& p) {
  if (p.beta < 1.0)
    throw Error(ErrorKind::BetaBelowOne, "bar chi is defined for beta >= 1 only");
  const double th = theta(p.beta - 1.0);
  return p.m == 1.0 ? p.a / (2.0 * p.mu * th) : p.b / (p.mu * th);
}

double underbar_v(const ModelParams& p) {
  const double ratio = p.a / (2.0 * p.b);
  if (p.m == 1.0) return p.nu / p.mu * std::pow(ratio, p.gamma / p.alpha);
  const double expo = std::max(1.0 / (p.m - 1.0), 1.0 / p.alpha);
  return p.nu / p.mu * std::pow(std::min(1.0, std::pow(ratio, expo)), p.gamma);
}

std::string_view to_string(Provenance p) {
  return p == Provenance::UserSupplied ? "user-supplied" : "empirical";
}

AuxConstants aux_constants(const ModelParams& p, const Equilibrium& eq, int dimension,
                           double lambda_star, std::optional<M0Value> m0,
                           std::optional<CzConstant> cz) {
  (void)eq;
  AuxConstants aux{};
  aux.theta_beta = theta(p.beta);
  aux.c_alpha_gamma = power_diff_constant_unchecked(p.alpha, p.gamma);
  aux.c_alpha_gamma_valid = 2.0 * p.gamma <= p.alpha + 1.0;
  aux.tilde_beta = tilde_beta(p.beta);
  aux.ubar_v_ab = p.is_minimal() ? 0.0 : underbar_v(p);
  if (p.beta >= 1.0 && !p.is_minimal()) aux.bar_chi_ab_beta = bar_chi(p);
  aux.m0 = m0;
  aux.c_star_np = cz;
  if (cz) aux.k_star = k_star(dimension, p.alpha, p.gamma, p.mu, p.nu, &*cz);
  aux.lambda_star = lambda_star;
  return aux;
}

std::array<ThresholdEntry, 4> chi_double_star(const ModelParams& p, const Equilibrium& eq,
                                              const AuxConstants& aux) {
  if (p.is_minimal())
    throw Error(ErrorKind::MinimalModelUnsupported, "these thresholds need a, b > 0");
  const double u = eq.u_star;
  const double v = eq.v_star;
  const bool m_ok = p.m >= 1.0;
  const bool pd_ok = p.alpha + 1.0 >= 2.0 * p.gamma;
  const bool beta_ok = p.beta >= 1.0;
  const bool gamma_ok = p.gamma >= 1.0;

  // Common factor b·16μ/((2m−1)ν² C u*^{2γ−α+2m−2}).
  const double base = p.b * 16.0 * p.mu /
                      ((2.0 * p.m - 1.0) * p.nu * p.nu * aux.c_alpha_gamma *
                       std::pow(u, 2.0 * p.gamma - p.alpha + 2.0 * p.m - 2.0));

  std::array<ThresholdEntry, 4> out;

  out[0].value = std::sqrt(base * (1.0 + aux.tilde_beta * v));
  out[0].hypotheses = {{"m >= 1", m_ok}, {"alpha + 1 >= 2*gamma", pd_ok}};

  const double signal_term =
      std::sqrt(base * std::pow(1.0 + aux.ubar_v_ab, 2.0 * p.beta));
  out[1].value = aux.bar_chi_ab_beta ? std::min(*aux.bar_chi_ab_beta, signal_term) : signal_term;
  out[1].hypotheses = {{"m >= 1", m_ok}, {"beta >= 1", beta_ok}, {"alpha + 1 >= 2*gamma", pd_ok}};

  const double m0 = aux.m0 ? aux.m0->value : 0.0;
  const bool m0_needed = p.beta > 0.0 && v > 0.0;
  out[2].value = p.a / (p.nu * std::pow(u, p.m + p.gamma - 1.0)) / (2.0 + p.beta * v * m0 * m0);
  out[2].hypotheses = {
      {"m >= 1", m_ok},
      {"gamma >= 1", gamma_ok},
      {"alpha + 1 >= m + gamma + sign(beta)*gamma",
       p.alpha + 1.0 >= p.m + p.gamma + sign(p.beta) * p.gamma}};
  if (m0_needed) out[2].hypotheses.push_back({"M0 supplied", aux.m0.has_value()});

  const double lifted = std::pow(1.0 + aux.ubar_v_ab, p.beta) * out[2].value;
  out[3].value = aux.bar_chi_ab_beta ? std::min(*aux.bar_chi_ab_beta, lifted) : lifted;
  out[3].hypotheses = {{"m >= 1", m_ok},
                       {"beta >= 1", beta_ok},
                       {"gamma >= 1", gamma_ok},
                       {"alpha + 1 >= m + 2*gamma", p.alpha + 1.0 >= p.m + 2.0 * p.gamma}};
  if (m0_needed) out[3].hypotheses.push_back({"M0 supplied", aux.m0.has_value()});

  for (auto& e : out)
    e.applicable = std::all_of(e.hypotheses.begin(), e.hypotheses.end(),
                               [](const HypothesisCheck& h) { return h.holds; });
  return out;
}

double minimal_gamma_factor(double u_star, double gamma, double ubar0) {
  return gamma <= 1.0 ? std::pow(u_star, gamma - 1.0) * ubar0 : gamma * std::pow(ubar0, gamma);
}

double minimal_chi_ss1(double u_star, double gamma, double beta, double mu, double nu,
                       int dimension, double lambda_star, double ubar0, double vlower0) {
  if (!(ubar0 > 0.0) || !(vlower0 > 0.0))
    throw Error(ErrorKind::NonPositiveCoefficient, "ubar0 and vlower0 must be positive");
  const double cb = chi_beta_threshold(beta, gamma, dimension);
  const double third = 2.0 * std::sqrt(mu * lambda_star) * std::pow(1.0 + vlower0, beta) /
                       (nu * minimal_gamma_factor(u_star, gamma, ubar0));
  return std::min({cb / 2.0, std::sqrt(cb), third});
}

double minimal_chi_ss2(double gamma, double beta, double mu, double nu, int dimension,
                       double ubar0, double vlower0) {
  if (gamma != 1.0)
    throw Error(ErrorKind::GammaNotOne, fmt::format("second minimal threshold needs gamma = 1, got {}", gamma));
  if (!(ubar0 > 0.0) || !(vlower0 > 0.0))
    throw Error(ErrorKind::NonPositiveCoefficient, "ubar0 and vlower0 must be positive");
  const double cb = chi_beta_threshold(beta, gamma, dimension);
  const double third = mu * std::pow(1.0 + vlower0, beta) / (nu * ubar0);
  return std::min({cb / 2.0, std::sqrt(cb), third});
}

MinimalThresholds minimal_thresholds(double u_star, double gamma, double beta, double mu,
                                     double nu, int dimension, double lambda_star, double ubar0,
                                     double vlower0, Provenance inputs) {
  MinimalThresholds out{};
  out.gamma_factor = minimal_gamma_factor(u_star, gamma, ubar0);
  out.chi_ss1 =
      minimal_chi_ss1(u_star, gamma, beta, mu, nu, dimension, lambda_star, ubar0, vlower0);
  if (gamma == 1.0) out.chi_ss2 = minimal_chi_ss2(gamma, beta, mu, nu, dimension, ubar0, vlower0);
  out.ubar0 = ubar0;
  out.vlower0 = vlower0;
  out.inputs = inputs;
  return out;
}

double estimate_m0(const GridDomain& grid, double mu, double nu, std::size_t samples,
                   std::mt19937_64& rng) {
  if (samples < 1) throw Error(ErrorKind::ConfigError, "estimate_m0 needs at least one sample");
  const HelmholtzOperator op(grid, mu);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> freq(0, 8);
  const int nx = grid.cells(0);
  const int ny = grid.cells(1);
  Field f(grid.size());
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::fill(f.begin(), f.end(), 0.0);
    const int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
      const double c = coef(rng);
      const int jx = freq(rng);
      const int jy = grid.dimension() == 2 ? freq(rng) : 0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          double shape = std::cos(jx * std::numbers::pi * grid.center(0, i) / grid.length(0));
          if (grid.dimension() == 2)
            shape *= std::cos(jy * std::numbers::pi * grid.center(1, j) / grid.length(1));
          f[i + static_cast<std::size_t>(nx) * j] += c * shape;
        }
    }
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double osc = *hi - *lo;
    if (!(osc > 1e-12)) continue;  // constant field: ∇w = 0
    const double shift = *lo;
    Field rhs(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) rhs[k] = nu * (f[k] - shift) / osc;
    const Field w = solve_helmholtz(op, rhs);

    double grad = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const std::size_t c = i + static_cast<std::size_t>(nx) * j;
        grad = std::max(grad, std::abs(w[c + 1] - w[c]) / grid.spacing(0));
      }
    if (grid.dimension() == 2)
      for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const std::size_t c = i + static_cast<std::size_t>(nx) * j;
          grad = std::max(grad, std::abs(w[c + nx] - w[c]) / grid.spacing(1));
        }
    best = std::max(best, grad * std::sqrt(mu) / nu);
  }
  return best;
}

ThresholdReport compute_thresholds(const ModelParams& params, const Equilibrium& eq,
                                   const GridDomain& grid, const ThresholdInputs& in) {
  const ModelParams p = validate_params(params);
  const int dim = grid.dimension();
  ThresholdReport report{};
  const SpectrumTable spectrum = neumann_eigenvalues(grid, 1000);
  const auto crit = critical_sensitivity(p, eq, spectrum);
  report.chi_star = crit.chi_star;
  report.argmin_mode = crit.argmin_mode;
  if (p.beta >= 1.0) report.chi_beta = chi_beta_threshold(p.beta, p.gamma, dim);

  if (in.cz && !in.cz->rigorous)
    report.notes.push_back("C*_{N,p} is the nonrigorous stub; K* and the equality-case "
                           "boundedness thresholds are indicative only");
  if (in.m0 && in.m0->provenance == Provenance::Empirical)
    report.notes.push_back("M0 is an empirical lower bound");

  if (!p.is_minimal()) {
    report.aux = aux_constants(p, eq, dim, spectrum.lambda_star(), in.m0, in.cz);
    try {
      std::optional<double> k;
      if (report.aux->k_star) k = report.aux->k_star->value;
      report.chi_ab_beta = chi_ab_beta(p, dim, k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MissingKStar) throw;
      report.notes.push_back(e.what());
    }
    report.chi_ss = chi_double_star(p, eq, *report.aux);
  } else {
    report.chi_ab_beta = std::nullopt;
    if (p.beta < 1.0)
      report.notes.push_back("minimal-model thresholds need beta >= 1");
    else if (!in.ubar0 || !in.vlower0)
      report.notes.push_back("minimal-model thresholds need ubar0 and vlower0");
    else
      report.minimal = minimal_thresholds(eq.u_star, p.gamma, p.beta, p.mu, p.nu, dim,
                                          spectrum.lambda_star(), *in.ubar0, *in.vlower0,
                                          in.minimal_inputs);
  }
  return report;
}

std::string_view to_string(OrderingPart part) {
  switch (part) {
    case OrderingPart::First: return "first";
    case OrderingPart::Second: return "second";
    case OrderingPart::Third: return "third";
    case OrderingPart::Fourth: return "fourth";
    case OrderingPart::Minimal: return "minimal";
  }
  return "?";
}

std::vector<std::string> ordering_hypothesis_failures(OrderingPart part, const ModelParams& p) {
  std::vector<std::string> failed;
  auto need = [&](bool ok, const char* text) {
    if (!ok) failed.emplace_back(text);
  };
  if (part == OrderingPart::Minimal) {
    need(p.is_minimal(), "a = b = 0");
    need(p.m == 1.0, "m = 1");
    need(p.beta >= 1.0, "beta >= 1");
    return failed;
  }
  need(p.a > 0.0 && p.b > 0.0, "a, b > 0");
  need(p.m >= 1.0, "m >= 1");
  switch (part) {
    case OrderingPart::First:
      need(p.alpha + 1.0 >= 2.0 * p.gamma, "alpha + 1 >= 2*gamma");
      break;
    case OrderingPart::Second:
      need(p.beta >= 1.0, "beta >= 1");
      need(p.alpha + 1.0 >= 2.0 * p.gamma, "alpha + 1 >= 2*gamma");
      break;
    case OrderingPart::Third:
      need(p.gamma >= 1.0, "gamma >= 1");
      need(p.alpha + 1.0 >= p.m + p.gamma, "alpha + 1 >= m + gamma");
      break;
    case OrderingPart::Fourth:
      need(p.beta >= 1.0, "beta >= 1");
      need(p.gamma >= 1.0, "gamma >= 1");
      need(p.alpha + 1.0 >= p.m + 2.0 * p.gamma, "alpha + 1 >= m + 2*gamma");
      break;
    case OrderingPart::Minimal:
      break;
  }
  return failed;
}

OrderingSample sample_ordering_tuple(OrderingPart part, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  };

  OrderingSample s{};
  ModelParams& p = s.params;
  s.dimension = unit(rng) < 0.5 ? 1 : 2;
  s.length = uniform(0.5, 20.0);
  s.m0 = uniform(0.0, 2.0);
  p.mu = log_uniform(1e-2, 1e2);
  p.nu = log_uniform(1e-2, 1e2);
  p.chi0 = 0.0;

  if (part == OrderingPart::Minimal) {
    p.a = p.b = 0.0;
    p.m = 1.0;
    p.beta = uniform(1.0, 6.0);
    p.gamma = unit(rng) < 0.5 ? 1.0 : uniform(0.1, 3.0);
    p.alpha = 1.0;
    s.u_star = log_uniform(1e-3, 1e3);
    s.ubar0 = s.u_star * uniform(1.0, 5.0);
    const double v_star = p.nu / p.mu * std::pow(s.u_star, p.gamma);
    s.vlower0 = v_star * uniform(0.01, 1.0);
    return s;
  }

  p.a = log_uniform(1e-2, 1e2);
  p.b = log_uniform(1e-2, 1e2);
  p.m = unit(rng) < 0.3 ? 1.0 : uniform(1.0, 3.0);
  switch (part) {
    case OrderingPart::First:
      p.beta = uniform(0.0, 6.0);
      p.gamma = uniform(0.1, 3.0);
      p.alpha = uniform(std::max(0.05, 2.0 * p.gamma - 1.0), 6.0);
      break;
    case OrderingPart::Second:
      p.beta = uniform(1.0, 6.0);
      p.gamma = uniform(0.1, 3.0);
      p.alpha = uniform(std::max(0.05, 2.0 * p.gamma - 1.0), 6.0);
      break;
    case OrderingPart::Third:
      p.beta = unit(rng) < 0.2 ? 0.0 : uniform(0.0, 6.0);
      p.gamma = uniform(1.0, 3.0);
      p.alpha = uniform(p.m + p.gamma - 1.0, p.m + p.gamma + 3.0);
      break;
    case OrderingPart::Fourth:
      p.beta = uniform(1.0, 6.0);
      p.gamma = uniform(1.0, 3.0);
      p.alpha = uniform(p.m + 2.0 * p.gamma - 1.0, p.m + 2.0 * p.gamma + 3.0);
      break;
    case OrderingPart::Minimal:
      break;
  }
  s.u_star = std::pow(p.a / p.b, 1.0 / p.alpha);
  s.ubar0 = s.vlower0 = 0.0;
  return s;
}

namespace {

std::string describe(const OrderingSample& s) {
  const ModelParams& p = s.params;
  return fmt::format(
      "chi0={} beta={} m={} alpha={} gamma={} a={} b={} mu={} nu={} u*={} ubar0={} vlower0={} "
      "L={} N={} M0={}",
      p.chi0, p.beta, p.m, p.alpha, p.gamma, p.a, p.b, p.mu, p.nu, s.u_star, s.ubar0, s.vlower0,
      s.length, s.dimension, s.m0);
}

bool exceeds(double lhs, double rhs) { return lhs > rhs * (1.0 + 1e-12); }

// Random tuples can put √(aαμ) far up the spectrum; extend the table until the
// infimum over modes is attained.
SpectrumTable spectrum_past_turning(const GridDomain& domain, const ModelParams& p) {
  const double turning = std::sqrt(p.a * p.alpha * p.mu);
  int n_max = 1000;
  SpectrumTable spectrum = neumann_eigenvalues(domain, n_max);
  while (spectrum.eigenvalues.back() < turning && n_max < (1 << 22)) {
    n_max *= 4;
    spectrum = neumann_eigenvalues(domain, n_max);
  }
  return spectrum;
}

}  // namespace

OrderingReport verify_orderings(OrderingPart part, std::size_t trials, std::mt19937_64& rng,
                                const OrderingGenerator& generator) {
  OrderingReport report;
  report.part = part;
  for (std::size_t t = 0; t < trials; ++t) {
    const OrderingSample s =
        generator ? generator(rng) : sample_ordering_tuple(part, rng);
    ++report.trials;
    const auto failed = ordering_hypothesis_failures(part, s.params);
    if (!failed.empty()) {
      ++report.skipped;
      std::string reason = describe(s) + " fails:";
      for (const auto& f : failed) reason += " " + f + ";";
      report.skip_reasons.push_back(std::move(reason));
      continue;
    }
    const GridDomain domain = s.dimension == 1
                                  ? GridDomain::interval(s.length, 8)
                                  : GridDomain::rectangle(s.length, 0.5 * s.length + 0.5, 8, 8);
    const Equilibrium eq = equilibrium(
        s.params, s.params.is_minimal() ? std::optional<double>(s.u_star) : std::nullopt);
    const SpectrumTable spectrum = spectrum_past_turning(domain, s.params);
    const double chi_star = critical_sensitivity(s.params, eq, spectrum).chi_star;
    ++report.checked;

    bool bad = false;
    std::string what;
    if (part == OrderingPart::Minimal) {
      const auto mt = minimal_thresholds(s.u_star, s.params.gamma, s.params.beta, s.params.mu,
                                         s.params.nu, s.dimension, spectrum.lambda_star(),
                                         s.ubar0, s.vlower0, Provenance::UserSupplied);
      const double cb = chi_beta_threshold(s.params.beta, s.params.gamma, s.dimension);
      auto check = [&](double value, const char* name) {
        if (exceeds(value, chi_star) || exceeds(value, cb)) {
          bad = true;
          what += fmt::format(" {}={} chi_beta={} chi*={};", name, value, cb, chi_star);
        }
      };
      check(mt.chi_ss1, "chi_ss1");
      if (mt.chi_ss2) check(*mt.chi_ss2, "chi_ss2");
      if (exceeds(cb, 2.0 * chi_star)) {
        bad = true;
        what += fmt::format(" chi_beta={} > 2 chi*={};", cb, 2.0 * chi_star);
      }
    } else {
      const AuxConstants aux =
          aux_constants(s.params, eq, s.dimension, spectrum.lambda_star(),
                        M0Value{s.m0, Provenance::UserSupplied}, std::nullopt);
      const auto entries = chi_double_star(s.params, eq, aux);
      const std::size_t idx = static_cast<std::size_t>(part);
      if (exceeds(entries[idx].value, chi_star)) {
        bad = true;
        what = fmt::format(" threshold={} chi*={}", entries[idx].value, chi_star);
      }
    }
    if (bad) {
      ++report.violations;
      report.violation_tuples.push_back(describe(s) + what);
    }
  }
  return report;
}

}  // namespace chemostab
