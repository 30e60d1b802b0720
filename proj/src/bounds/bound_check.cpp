#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "lcmetrics/bounds.hpp"

namespace lcm {

double BoundCheck::ratio() const {
  if (lhs <= 0.0) return 0.0;
  if (rhs_unit <= 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs_unit;
}

BoundCheck make_check(std::string bound_id, std::string variant, double lhs, double lhs_error, double rhs_unit,
                      double rhs_unit_error, std::string inputs, std::optional<double> constant) {
  BoundCheck b;
  b.bound_id = std::move(bound_id);
  b.variant = std::move(variant);
  b.lhs = lhs;
  b.lhs_error = lhs_error;
  b.rhs_unit = rhs_unit;
  b.rhs_unit_error = rhs_unit_error;
  b.inputs = std::move(inputs);
  b.vacuous = std::abs(lhs) < kVacuousThreshold && std::abs(rhs_unit) < kVacuousThreshold;
  BoundCheck out = apply_constant(std::move(b), constant.value_or(1.0));
  out.constant = constant;
  return out;
}

BoundCheck apply_constant(BoundCheck check, double constant) {
  if (!(constant >= 0.0)) throw std::invalid_argument("apply_constant: constant must be >= 0");
  check.constant = constant;
  check.rhs = std::isinf(check.rhs_unit) ? check.rhs_unit : constant * check.rhs_unit;
  check.slack = check.rhs - check.lhs;
  check.tolerance = check.lhs_error + constant * check.rhs_unit_error;
  if (std::isnan(check.slack)) check.slack = std::isinf(check.lhs) ? -std::numeric_limits<double>::infinity() : 0.0;
  check.holds = check.vacuous || check.slack >= -check.tolerance;
  return check;
}

ConstantFit fit_constant(std::span<const BoundCheck> suite) {
  if (suite.empty()) throw std::invalid_argument("fit_constant: empty suite");
  ConstantFit fit;
  bool any = false;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (suite[i].vacuous) continue;
    ++fit.used;
    const double r = suite[i].ratio();
    if (!any || r > fit.constant) {
      fit.constant = r;
      fit.argmax = i;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument(fmt::format("fit_constant: all-vacuous suite for {}", suite.front().key()));
  return fit;
}

PairMetrics compute_pair_metrics(const LogConcaveDensity& mu, const LogConcaveDensity& nu, const MetricOptions& opt) {
  if (mu.dimension() != nu.dimension()) throw std::invalid_argument("compute_pair_metrics: dimension mismatch");
  PairMetrics m;
  m.n = mu.dimension();
  m.inputs = fmt::format("{} vs {}", mu.label(), nu.label());
  m.h = relative_entropy(mu, nu, {opt.mc_samples, opt.seed});
  if (m.n == 1) {
    m.exact = true;
    m.tv = tv_distance_1d(mu, nu);
    m.ks = kolmogorov_distance_1d(mu, nu);
    m.bl_lower = bl_distance_1d(mu, nu, opt.grid_size);
    m.bl_upper = m.bl_lower;
    m.w1 = wasserstein_p_1d(mu, nu, 1.0);
    m.w2 = wasserstein_p_1d(mu, nu, 2.0);
    m.w4 = wasserstein_p_1d(mu, nu, 4.0);
    return m;
  }
  m.exact = false;
  m.tv = tv_distance_nd(mu, nu, opt.mc_samples, opt.seed);
  const BlSandwich s = bl_sandwich_nd(mu, nu, opt.grid_size, opt.mc_samples, opt.seed);
  m.bl_lower = s.lower;
  m.bl_upper = s.upper;
  m.w1 = wasserstein_p_nd_upper(mu, nu, 1.0, opt.mc_samples, opt.seed);
  m.w2 = wasserstein_p_nd_upper(mu, nu, 2.0, opt.mc_samples, opt.seed);
  m.w4 = wasserstein_p_nd_upper(mu, nu, 4.0, opt.mc_samples, opt.seed);
  return m;
}

}  // namespace lcm
