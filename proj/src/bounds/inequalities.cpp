#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "lcmetrics/bounds.hpp"

namespace lcm {
namespace {

// Largest change of f when its argument moves by err, keeping it nonnegative.
template <class F>
double spread(F f, double x, double err) {
  if (!(err > 0.0)) return 0.0;
  const double fx = f(x);
  return std::max(std::abs(f(x + err) - fx), std::abs(f(std::max(x - err, 0.0)) - fx));
}

void require_isotropic(const LogConcaveDensity& d, const char* who) {
  if (!d.is_isotropic()) throw std::invalid_argument(fmt::format("{}: input must be isotropic", who));
}

}  // namespace

BoundCheck check_classical_bl_tv(const PairMetrics& m) {
  return make_check("classical-bl-tv", "", m.bl_lower.value, m.bl_lower.abs_error, m.tv.value, m.tv.abs_error,
                    m.inputs);
}

BoundCheck check_classical_bl_w1(const PairMetrics& m) {
  return make_check("classical-bl-w1", "", m.bl_lower.value, m.bl_lower.abs_error, m.w1.value, m.w1.abs_error,
                    m.inputs);
}

std::vector<BoundCheck> check_wp_monotone(const PairMetrics& m) {
  return {make_check("wp-monotone", "1<=2", m.w1.value, m.w1.abs_error, m.w2.value, m.w2.abs_error, m.inputs),
          make_check("wp-monotone", "2<=4", m.w2.value, m.w2.abs_error, m.w4.value, m.w4.abs_error, m.inputs)};
}

BoundCheck check_kolmogorov_tv(const PairMetrics& m) {
  if (!m.ks) throw std::invalid_argument("check_kolmogorov_tv: Kolmogorov distance is one-dimensional");
  return make_check("kolmogorov-tv", "", m.ks->value, m.ks->abs_error, 0.5 * m.tv.value, 0.5 * m.tv.abs_error,
                    m.inputs);
}

BoundCheck check_pinsker(const PairMetrics& m) {
  const auto f = [](double h) { return std::sqrt(2.0 * h); };
  if (m.h.is_infinite()) {
    return make_check("pinsker", "", m.tv.value, m.tv.abs_error, m.h.value, 0.0, m.inputs + " (H infinite)");
  }
  return make_check("pinsker", "", m.tv.value, m.tv.abs_error, f(m.h.value), spread(f, m.h.value, m.h.abs_error),
                    m.inputs);
}

BoundCheck check_tv_bl(const PairMetrics& m, std::optional<double> c) {
  const double n = static_cast<double>(m.n);
  const auto f = [n](double bl) { return std::sqrt(n * bl); };
  // In n-D the lower end of the bracket already absorbs its band.
  const double err = m.exact ? spread(f, m.bl_lower.value, m.bl_lower.abs_error) : 0.0;
  return make_check("tv-bl", "", m.tv.value, m.tv.abs_error, f(m.bl_lower.value), err, m.inputs, c);
}

BoundCheck check_bhvv(const PairMetrics& m, std::optional<double> c) {
  if (m.n != 1 || !m.ks) throw std::invalid_argument("check_bhvv: dimension must be 1");
  const auto f = [](double dk) { return dk > 0.0 ? std::sqrt(std::max(1.0, std::log(1.0 / dk)) * dk) : 0.0; };
  return make_check("bhvv", "", m.tv.value, m.tv.abs_error, f(m.ks->value), spread(f, m.ks->value, m.ks->abs_error),
                    m.inputs, c);
}

BoundCheck check_w1_bl(const PairMetrics& m, std::optional<double> c) {
  const double rn = std::sqrt(static_cast<double>(m.n));
  const auto f = [rn](double bl) { return bl > 0.0 ? std::max(rn, std::log(rn / bl)) * bl : 0.0; };
  const double err = m.exact ? spread(f, m.bl_lower.value, m.bl_lower.abs_error) : 0.0;
  return make_check("w1-bl", "", m.w1.value, m.w1.abs_error, f(m.bl_lower.value), err, m.inputs, c);
}

BoundCheck check_wq_wp(const PairMetrics& m, int p, int q, double c_in, std::optional<double> c) {
  if (q <= p) throw std::invalid_argument("check_wq_wp: need q > p");
  if (p < 1) throw std::invalid_argument("check_wq_wp: need p >= 1");
  if (!(c_in > 0.0)) throw std::invalid_argument("check_wq_wp: inner constant must be positive");
  const auto pick = [&m](int r) -> const MetricResult& {
    switch (r) {
      case 1: return m.w1;
      case 2: return m.w2;
      case 4: return m.w4;
      default: throw std::invalid_argument(fmt::format("check_wq_wp: W_{} is not computed", r));
    }
  };
  const MetricResult& wp = pick(p);
  const MetricResult& wq = pick(q);
  const double rn = std::sqrt(static_cast<double>(m.n));
  const double pp = p;
  const double qq = q;
  const double head = qq * std::log(c_in * std::max(qq, rn));
  // Written in terms of W_p itself so errors propagate through one argument.
  const auto f = [=](double w) {
    if (!(w > 0.0)) return 0.0;
    const double log_wpp = pp * std::log(w);
    return std::pow(std::max(rn, head - log_wpp), qq - pp) * std::exp(log_wpp);
  };
  const auto lhs = [qq](double w) { return std::pow(w, qq); };
  return make_check("wq-wp", fmt::format("p={},q={}", p, q), lhs(wq.value), spread(lhs, wq.value, wq.abs_error),
                    f(wp.value), spread(f, wp.value, wp.abs_error), m.inputs, c);
}

namespace {

BoundCheck h_tv_impl(const PairMetrics& m, std::optional<double> c, bool bounded_lf) {
  const double n = static_cast<double>(m.n);
  const double floor_term = bounded_lf ? n : n * std::log(n + 1.0);
  const auto f = [=](double tv) {
    if (!(tv > 0.0)) return 0.0;
    const double l = std::log(n / tv);
    return std::max(l * l, floor_term) * tv;
  };
  return make_check(bounded_lf ? "h-tv-bounded-Lf" : "h-tv", "", m.h.value, m.h.abs_error, f(m.tv.value),
                    spread(f, m.tv.value, m.tv.abs_error), m.inputs, c);
}

}  // namespace

BoundCheck check_h_tv(const PairMetrics& m, std::optional<double> c) { return h_tv_impl(m, c, false); }
BoundCheck check_h_tv_bounded_lf(const PairMetrics& m, std::optional<double> c) { return h_tv_impl(m, c, true); }

BoundCheck check_tv_bl(const LogConcaveDensity& mu, const LogConcaveDensity& nu, const MetricOptions& opt) {
  require_isotropic(mu, "check_tv_bl");
  require_isotropic(nu, "check_tv_bl");
  return check_tv_bl(compute_pair_metrics(mu, nu, opt));
}

BoundCheck check_bhvv(const LogConcaveDensity& mu, const MetricOptions& opt) {
  if (mu.dimension() != 1) throw std::invalid_argument("check_bhvv: dimension must be 1");
  return check_bhvv(compute_pair_metrics(mu, make_standard_gaussian(1), opt));
}

BoundCheck check_w1_bl(const LogConcaveDensity& mu, const LogConcaveDensity& nu, const MetricOptions& opt) {
  require_isotropic(mu, "check_w1_bl");
  require_isotropic(nu, "check_w1_bl");
  return check_w1_bl(compute_pair_metrics(mu, nu, opt));
}

BoundCheck check_wq_wp(const LogConcaveDensity& mu, const LogConcaveDensity& nu, int p, int q, double c_in,
                       const MetricOptions& opt) {
  require_isotropic(mu, "check_wq_wp");
  require_isotropic(nu, "check_wq_wp");
  return check_wq_wp(compute_pair_metrics(mu, nu, opt), p, q, c_in);
}

BoundCheck check_h_tv(const LogConcaveDensity& mu, const MetricOptions& opt) {
  require_isotropic(mu, "check_h_tv");
  return check_h_tv(compute_pair_metrics(mu, make_standard_gaussian(mu.dimension()), opt));
}

}  // namespace lcm
