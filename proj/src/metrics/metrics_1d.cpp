#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "lcmetrics/metrics.hpp"
#include "lcmetrics/numerics.hpp"
#include "metrics/internal.hpp"

namespace lcm {

using numerics::Integral;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kQuadrature: return "quadrature";
    case Method::kQuantileQuadrature: return "quantile-quadrature";
    case Method::kGridLp: return "grid-LP";
    case Method::kMonteCarlo: return "monte-carlo";
    case Method::kClosedForm: return "closed-form";
  }
  return "unknown";
}

Interval common_range(const Component1D& a, const Component1D& b, double eps) {
  const Interval ea = a.effective_support(eps);
  const Interval eb = b.effective_support(eps);
  return {std::min(ea.lo, eb.lo), std::max(ea.hi, eb.hi)};
}

namespace detail {

// Points of [lo, hi] where h changes sign, plus the kinks of both laws. Each
// smooth piece is scanned separately so a jump is never mistaken for a root.
std::vector<double> split_points(const Component1D& a, const Component1D& b, const numerics::Fn& h, double lo,
                                 double hi, int scan_total) {
  std::vector<double> kinks = a.breakpoints();
  const auto kb = b.breakpoints();
  kinks.insert(kinks.end(), kb.begin(), kb.end());
  const std::vector<double> pieces = numerics::partition(kinks, lo, hi);
  std::vector<double> points = pieces;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double len = pieces[i + 1] - pieces[i];
    const int n_scan = std::max(64, static_cast<int>(scan_total * len / (hi - lo)));
    // Nudge inward so one-sided limits at a jump are used.
    const double pad = 1e-12 * std::max(1.0, std::abs(pieces[i]) + std::abs(pieces[i + 1]));
    const auto roots = numerics::sign_changes(h, pieces[i] + pad, pieces[i + 1] - pad, n_scan);
    points.insert(points.end(), roots.begin(), roots.end());
  }
  return numerics::partition(points, lo, hi);
}

double mass(const Component1D& c, double a, double b) {
  if (a > c.mean()) return c.sf(a) - c.sf(b);
  return c.cdf(b) - c.cdf(a);
}

}  // namespace detail

namespace {

constexpr double kTailEps = 1e-12;
// Entropy integrands carry log-density weights, so their tails are cut deeper.
constexpr double kEntropyTailEps = 1e-20;

void require_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu) {
  if (mu.dimension() != 1 || nu.dimension() != 1) {
    throw std::invalid_argument("one-dimensional metric called with dimension != 1");
  }
}

}  // namespace

MetricResult tv_distance_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu) {
  require_1d(mu, nu);
  const Component1D& a = mu.as_1d();
  const Component1D& b = nu.as_1d();
  const Interval r = common_range(a, b, kTailEps);
  const auto diff = [&](double x) { return a.pdf(x) - b.pdf(x); };
  const auto pts = detail::split_points(a, b, diff, r.lo, r.hi, 4096);
  const Integral in = numerics::integrate_pieces([&](double x) { return std::abs(diff(x)); }, pts);
  return {std::min(in.value, 2.0), in.error + 4.0 * kTailEps, Method::kQuadrature,
          fmt::format("{} crossing-split pieces", pts.size() - 1)};
}

MetricResult kolmogorov_distance_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu) {
  require_1d(mu, nu);
  const Component1D& a = mu.as_1d();
  const Component1D& b = nu.as_1d();
  const Interval r = common_range(a, b, kTailEps);
  const auto gap = [&](double x) {
    return x > 0.5 * (a.mean() + b.mean()) ? std::abs(a.sf(x) - b.sf(x)) : std::abs(a.cdf(x) - b.cdf(x));
  };

  constexpr int kScan = 1 << 16;
  const double h = r.length() / kScan;
  std::vector<double> values(kScan + 1);
  for (int i = 0; i <= kScan; ++i) values[static_cast<std::size_t>(i)] = gap(r.lo + i * h);

  // Refine around the largest local maxima of the scan.
  std::vector<int> peaks;
  for (int i = 0; i <= kScan; ++i) {
    const double v = values[static_cast<std::size_t>(i)];
    const bool left = i == 0 || v >= values[static_cast<std::size_t>(i - 1)];
    const bool right = i == kScan || v >= values[static_cast<std::size_t>(i + 1)];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int x, int y) { return values[static_cast<std::size_t>(x)] > values[static_cast<std::size_t>(y)]; });
  if (peaks.size() > 8) peaks.resize(8);

  double best = *std::max_element(values.begin(), values.end());
  for (const int i : peaks) {
    const double lo = r.lo + std::max(i - 1, 0) * h;
    const double hi = r.lo + std::min(i + 1, kScan) * h;
    const auto res = boost::math::tools::brent_find_minima([&](double x) { return -gap(x); }, lo, hi, 52);
    best = std::max(best, -res.second);
  }
  return {std::min(best, 1.0), 1e-12, Method::kQuadrature, "grid scan 2^16 + Brent refinement"};
}

namespace detail {

Integral quantile_moment(const Component1D& a, const Component1D& b, double p) {
  // Quantile differences change sign exactly where the CDFs cross.
  const Interval r = common_range(a, b, kTailEps);
  const auto cdf_gap = [&](double x) { return a.cdf(x) - b.cdf(x); };
  const auto xs = split_points(a, b, cdf_gap, r.lo, r.hi, 4096);
  std::vector<double> us{0.5};
  for (const double x : xs) {
    us.push_back(a.cdf(x));
    us.push_back(b.cdf(x));
  }
  const auto pieces = numerics::partition(us, kTailEps, 1.0 - kTailEps);

  const auto integrand = [&](double u) { return std::pow(std::abs(a.quantile(u) - b.quantile(u)), p); };
  Integral total;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Integral piece = numerics::integrate_endpoint_singular(integrand, pieces[i], pieces[i + 1]);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

}  // namespace detail

MetricResult wasserstein_p_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("wasserstein_p_1d: p must be >= 1");
  require_1d(mu, nu);
  const Integral total = detail::quantile_moment(mu.as_1d(), nu.as_1d(), p);
  if (total.value <= 0.0) return {0.0, 0.0, Method::kQuantileQuadrature, "identical quantiles"};
  const double w = std::pow(total.value, 1.0 / p);
  // Propagate through x -> x^{1/p}; add the quantile solver accuracy.
  const double err = total.error * w / (p * total.value) + 2e-10;
  return {w, err, Method::kQuantileQuadrature, fmt::format("p={:g}", p)};
}

MetricResult w1_dual_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu) {
  require_1d(mu, nu);
  const Component1D& a = mu.as_1d();
  const Component1D& b = nu.as_1d();
  const Interval r = common_range(a, b, kTailEps);
  const double mid = 0.5 * (a.mean() + b.mean());
  const auto gap = [&](double x) { return x > mid ? b.sf(x) - a.sf(x) : a.cdf(x) - b.cdf(x); };
  const auto pts = detail::split_points(a, b, gap, r.lo, r.hi, 4096);
  const Integral in = numerics::integrate_pieces([&](double x) { return std::abs(gap(x)); }, pts);
  return {in.value, in.error + 1e-11, Method::kQuadrature, "integral of |F_mu - F_nu|"};
}

namespace detail {

MetricResult relative_entropy_1d(const Component1D& a, const Component1D& b) {
  const Interval sa = a.support();
  const Interval sb = b.support();
  if (sa.lo < sb.lo || sa.hi > sb.hi) {
    return {std::numeric_limits<double>::infinity(), 0.0, Method::kQuadrature, "support violation"};
  }
  const Interval r = a.effective_support(kEntropyTailEps);
  std::vector<double> kinks = a.breakpoints();
  const auto kb = b.breakpoints();
  kinks.insert(kinks.end(), kb.begin(), kb.end());
  const auto pts = numerics::partition(kinks, r.lo, r.hi);
  const auto integrand = [&](double x) {
    const double la = a.log_pdf(x);
    if (!std::isfinite(la)) return 0.0;
    return std::exp(la) * (la - b.log_pdf(x));
  };
  const Integral in = numerics::integrate_pieces(integrand, pts);
  return {std::max(in.value, 0.0), in.error + 1e-11, Method::kQuadrature, "integral of f log(f/g)"};
}

MetricResult entropy_1d(const Component1D& a) {
  const Interval r = a.effective_support(kEntropyTailEps);
  const auto pts = numerics::partition(a.breakpoints(), r.lo, r.hi);
  const auto integrand = [&](double x) {
    const double la = a.log_pdf(x);
    if (!std::isfinite(la)) return 0.0;
    return -std::exp(la) * la;
  };
  const Integral in = numerics::integrate_pieces(integrand, pts);
  return {in.value, in.error + 1e-11, Method::kQuadrature, "-integral of f log f"};
}

}  // namespace detail

}  // namespace lcm
