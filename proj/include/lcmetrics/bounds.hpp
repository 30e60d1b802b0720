#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcmetrics/distributions.hpp"
#include "lcmetrics/metrics.hpp"

namespace lcm {

/// One evaluated instance of an inequality lhs <= C * rhs_unit.
///
/// Classical inequalities carry no constant and compare lhs with rhs_unit
/// directly. For the reversed ones the constant is free: rhs is evaluated at
/// `constant` when set and at C = 1 otherwise, and fit_constant() picks the
/// smallest admissible value over a suite.
struct BoundCheck {
  std::string bound_id;
  std::string variant;  // e.g. "p=1,q=2"; empty when the bound has a single form
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_unit = 0.0;
  std::optional<double> constant;
  double slack = 0.0;
  double tolerance = 0.0;
  bool holds = true;
  bool vacuous = false;
  std::string inputs;

  // Error estimates of the two sides; tolerance is lhs_error + C * rhs_unit_error.
  double lhs_error = 0.0;
  double rhs_unit_error = 0.0;

  [[nodiscard]] std::string key() const { return variant.empty() ? bound_id : bound_id + "[" + variant + "]"; }
  [[nodiscard]] double ratio() const;
};

// Both sides below this are treated as 0 <= 0 and excluded from fitting.
inline constexpr double kVacuousThreshold = 1e-9;

BoundCheck make_check(std::string bound_id, std::string variant, double lhs, double lhs_error, double rhs_unit,
                      double rhs_unit_error, std::string inputs, std::optional<double> constant = std::nullopt);

// Re-evaluates rhs, slack, tolerance and holds at the given constant.
BoundCheck apply_constant(BoundCheck check, double constant);

struct ConstantFit {
  double constant = 0.0;
  std::size_t argmax = 0;  // index into the suite
  std::size_t used = 0;    // non-vacuous instances
};

// Smallest C with lhs <= C * rhs_unit on every non-vacuous instance.
// Throws std::invalid_argument when the suite is empty or entirely vacuous.
ConstantFit fit_constant(std::span<const BoundCheck> suite);

// ---- metric bundle shared by the pair checks -------------------------------

struct MetricOptions {
  std::size_t grid_size = 4096;
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 0;
};

/// Everything the pair inequalities need for one (mu, nu). In 1-D every
/// field is exact up to quadrature; in n dimensions tv is Monte Carlo, the
/// Wasserstein values come from the product quantile coupling (upper
/// bounds) and d_BL is only bracketed.
struct PairMetrics {
  std::size_t n = 1;
  bool exact = true;
  MetricResult tv;
  std::optional<MetricResult> ks;  // 1-D only
  MetricResult bl_lower;
  MetricResult bl_upper;
  MetricResult w1;
  MetricResult w2;
  MetricResult w4;
  MetricResult h;  // H(mu | nu)
  std::string inputs;
};

PairMetrics compute_pair_metrics(const LogConcaveDensity& mu, const LogConcaveDensity& nu,
                                 const MetricOptions& opt = {});

// ---- classical inequalities (no free constant) -----------------------------

BoundCheck check_classical_bl_tv(const PairMetrics& m);
BoundCheck check_classical_bl_w1(const PairMetrics& m);
// variant "1<=2" or "2<=4".
std::vector<BoundCheck> check_wp_monotone(const PairMetrics& m);
// d_K <= d_TV / 2; 1-D only.
BoundCheck check_kolmogorov_tv(const PairMetrics& m);
// d_TV <= sqrt(2 H); infinite H holds trivially.
BoundCheck check_pinsker(const PairMetrics& m);

// ---- reversed inequalities (free constant) ---------------------------------

// d_TV <= C sqrt(n d_BL), with the lower end of the d_BL bracket.
BoundCheck check_tv_bl(const PairMetrics& m, std::optional<double> c = std::nullopt);
// d_TV(mu, gamma_1) <= C sqrt(max{1, log(1/d_K)} d_K); requires m against gamma_1 in 1-D.
BoundCheck check_bhvv(const PairMetrics& m, std::optional<double> c = std::nullopt);
// W_1 <= C max{sqrt(n), log(sqrt(n) / d_BL)} d_BL.
BoundCheck check_w1_bl(const PairMetrics& m, std::optional<double> c = std::nullopt);
// W_q^q <= C max{sqrt(n), log((c_in max{q, sqrt(n)})^q / W_p^p)}^{q-p} W_p^p for
// (p, q) in {(1, 2), (1, 4), (2, 4)}; c_in is the inner constant.
BoundCheck check_wq_wp(const PairMetrics& m, int p, int q, double c_in, std::optional<double> c = std::nullopt);
// H(mu | gamma_n) <= C max{log^2(n / d_TV), n log(n + 1)} d_TV, and with
// n log(n + 1) replaced by n for the bounded-isotropic-constant variant.
BoundCheck check_h_tv(const PairMetrics& m, std::optional<double> c = std::nullopt);
BoundCheck check_h_tv_bounded_lf(const PairMetrics& m, std::optional<double> c = std::nullopt);

// Density-level conveniences; reject non-isotropic inputs.
BoundCheck check_tv_bl(const LogConcaveDensity& mu, const LogConcaveDensity& nu, const MetricOptions& opt = {});
BoundCheck check_bhvv(const LogConcaveDensity& mu, const MetricOptions& opt = {});
BoundCheck check_w1_bl(const LogConcaveDensity& mu, const LogConcaveDensity& nu, const MetricOptions& opt = {});
BoundCheck check_wq_wp(const LogConcaveDensity& mu, const LogConcaveDensity& nu, int p, int q, double c_in,
                       const MetricOptions& opt = {});
BoundCheck check_h_tv(const LogConcaveDensity& mu, const MetricOptions& opt = {});

// ---- lemmas -----------------------------------------------------------------

struct MinLemma {
  double t_star = 0.0;
  double value = 0.0;  // A t*^k + B e^{-t*}
  double bound = 0.0;  // A (1 + t*^k)
};

// Throws std::invalid_argument unless A, B, M, k are all > 0.
MinLemma min_lemma_bound(double a, double b, double m, double k);
BoundCheck check_min_lemma(double a, double b, double m, double k);

// f * phi_t tabulated on `nodes` points over the effective support, from the
// exact law of X + t Z. 1-D only; t > 0.
GridFunction smooth_density_1d(const LogConcaveDensity& f, double t, std::size_t nodes = 4097);
// ||f - f * phi_t||_1 by quadrature. 1-D only; t > 0.
MetricResult deconvolution_gap_1d(const LogConcaveDensity& f, double t);
// gap <= c n t with n = 1.
BoundCheck check_eldan_klartag(const LogConcaveDensity& f, double t, std::optional<double> c = std::nullopt);

struct TailEstimate {
  double probability = 0.0;
  double band = 0.0;     // 95% half-width; zero when exact
  double upper = 0.0;    // conservative upper bound on the probability
  bool exact = false;
  std::string method;
};

// P[||X|| >= r]. Exactly zero when r exceeds the largest norm on the support;
// Monte Carlo otherwise.
TailEstimate paouris_tail(const LogConcaveDensity& mu, double r, std::size_t sample_count, std::uint64_t seed);
// Exact P[||Z|| >= r] for Z ~ gamma_n.
double gaussian_norm_tail(std::size_t n, double r);
// Monte Carlo (E ||X||^p)^{1/p}; p in [1, 10].
MetricResult paouris_moment(const LogConcaveDensity& mu, double p, std::size_t sample_count, std::uint64_t seed);

// P[||X|| >= R] <= e^{-cR}, recast as R <= (1/c)(-log P): the fitted constant is 1/c.
// Standard Gaussians use the exact chi tail; other laws the upper end of the
// Monte Carlo band.
BoundCheck check_paouris_tail(const LogConcaveDensity& mu, double r, std::size_t sample_count, std::uint64_t seed,
                              std::optional<double> c = std::nullopt);
// (E ||X||^p)^{1/p} <= C max{sqrt(n), p}.
BoundCheck check_paouris_moment(const LogConcaveDensity& mu, double p, std::size_t sample_count,
                                std::uint64_t seed, std::optional<double> c = std::nullopt);

// Monte Carlo Var(log f(Y)), Y ~ mu.
MetricResult bobkov_madiman_variance(const LogConcaveDensity& mu, std::size_t sample_count, std::uint64_t seed);
BoundCheck check_bobkov_madiman(const LogConcaveDensity& mu, std::size_t sample_count, std::uint64_t seed,
                                std::optional<double> c = std::nullopt);

// ||f||_inf^{1/n}.
double isotropic_constant(const LogConcaveDensity& mu);
BoundCheck check_isotropic_constant(const LogConcaveDensity& mu);
// h(mu) <= n log sqrt(2 pi e).
BoundCheck check_max_entropy(const LogConcaveDensity& mu);

}  // namespace lcm
