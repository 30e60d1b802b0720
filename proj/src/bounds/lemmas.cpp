#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "lcmetrics/bounds.hpp"

namespace lcm {
namespace {

constexpr double kZ95 = 1.96;

bool is_standard_gaussian(const LogConcaveDensity& mu) {
  if (!mu.is_product()) return false;
  return std::all_of(mu.factors().begin(), mu.factors().end(), [](const Component1D& c) {
    const auto* g = std::get_if<Gaussian1D>(&c.variant());
    return g != nullptr && g->mean == 0.0 && g->sd == 1.0;
  });
}

// Largest Euclidean norm on the support; infinite unless every factor is bounded.
double support_radius(const LogConcaveDensity& mu) {
  if (!mu.is_product()) return INFINITY;
  double sq = 0.0;
  for (const auto& c : mu.factors()) {
    const Interval s = c.support();
    if (std::isinf(s.lo) || std::isinf(s.hi)) return INFINITY;
    const double far = std::max(std::abs(s.lo), std::abs(s.hi));
    sq += far * far;
  }
  return std::sqrt(sq);
}

double norm(std::span<const double> x) {
  double sq = 0.0;
  for (const double v : x) sq += v * v;
  return std::sqrt(sq);
}

}  // namespace

MinLemma min_lemma_bound(double a, double b, double m, double k) {
  if (!(a > 0.0 && b > 0.0 && m > 0.0 && k > 0.0)) {
    throw std::invalid_argument("min_lemma_bound: A, B, M, k must all be positive");
  }
  const double log_ratio = std::log(b / a);
  MinLemma out;
  out.t_star = std::max(m, log_ratio);
  const double head = a * std::pow(out.t_star, k);
  // B e^{-t} = A e^{log(B/A) - t}, and the exponent is <= 0 by the choice of t,
  // so the second term never exceeds A in floating point either.
  out.value = head + a * std::exp(log_ratio - out.t_star);
  out.bound = head + a;
  return out;
}

BoundCheck check_min_lemma(double a, double b, double m, double k) {
  const MinLemma r = min_lemma_bound(a, b, m, k);
  return make_check("min-lemma", "", r.value, 0.0, r.bound, 0.0, fmt::format("A={:g} B={:g} M={:g} k={:g}", a, b, m, k));
}

GridFunction smooth_density_1d(const LogConcaveDensity& f, double t, std::size_t nodes) {
  if (!(t > 0.0)) throw std::invalid_argument("smooth_density_1d: t must be positive");
  if (nodes < 2) throw std::invalid_argument("smooth_density_1d: need at least two nodes");
  const Component1D smoothed = add_gaussian_noise(f.as_1d(), t);
  const Interval r = smoothed.effective_support(1e-14);
  std::vector<double> xs(nodes);
  std::vector<double> ys(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    xs[i] = r.lo + r.length() * static_cast<double>(i) / static_cast<double>(nodes - 1);
    ys[i] = smoothed.pdf(xs[i]);
  }
  return {std::move(xs), std::move(ys), 0.0};
}

MetricResult deconvolution_gap_1d(const LogConcaveDensity& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("deconvolution_gap_1d: t must be positive");
  const LogConcaveDensity smoothed({add_gaussian_noise(f.as_1d(), t)}, false,
                                   fmt::format("{}*phi_{:g}", f.label(), t));
  MetricResult r = tv_distance_1d(f, smoothed);
  r.detail = "||f - f*phi_t||_1, " + r.detail;
  return r;
}

BoundCheck check_eldan_klartag(const LogConcaveDensity& f, double t, std::optional<double> c) {
  if (!f.is_isotropic()) throw std::invalid_argument("check_eldan_klartag: input must be isotropic");
  const MetricResult gap = deconvolution_gap_1d(f, t);
  return make_check("eldan-klartag", "", gap.value, gap.abs_error, static_cast<double>(f.dimension()) * t, 0.0,
                    fmt::format("{} t={:g}", f.label(), t), c);
}

TailEstimate paouris_tail(const LogConcaveDensity& mu, double r, std::size_t sample_count, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("paouris_tail: R must be positive");
  if (sample_count == 0) throw std::invalid_argument("paouris_tail: need samples");
  TailEstimate out;
  if (support_radius(mu) < r) {
    out.exact = true;
    out.method = "support radius below R";
    return out;
  }
  Rng rng(seed, stable_hash(fmt::format("paouris_tail/R={}", r)));
  const SampleMatrix xs = mu.sample(sample_count, rng);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) hits += norm(xs.row(k)) >= r ? 1 : 0;
  const double n = static_cast<double>(sample_count);
  out.probability = static_cast<double>(hits) / n;
  out.band = kZ95 * std::sqrt(out.probability * (1.0 - out.probability) / n);
  // With no hits, the rule of three gives a 95% upper bound.
  out.upper = hits > 0 ? out.probability + out.band : 3.0 / n;
  out.method = fmt::format("monte-carlo, {} of {} samples", hits, sample_count);
  return out;
}

double gaussian_norm_tail(std::size_t n, double r) {
  // ||Z||^2 is chi-square with n degrees of freedom.
  return boost::math::gamma_q(0.5 * static_cast<double>(n), 0.5 * r * r);
}

MetricResult paouris_moment(const LogConcaveDensity& mu, double p, std::size_t sample_count, std::uint64_t seed) {
  if (!(p >= 1.0 && p <= 10.0)) throw std::invalid_argument("paouris_moment: p must lie in [1, 10]");
  if (sample_count < 2) throw std::invalid_argument("paouris_moment: need at least two samples");
  Rng rng(seed, stable_hash(fmt::format("paouris_moment/p={}", p)));
  const SampleMatrix xs = mu.sample(sample_count, rng);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double v = std::pow(norm(xs.row(k)), p);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(sample_count);
  const double band = kZ95 * std::sqrt(m2 / (n - 1.0) / n);
  const double value = std::pow(mean, 1.0 / p);
  return {value, band * value / (p * mean), Method::kMonteCarlo,
          fmt::format("(E||X||^{:g})^(1/{:g}), {} samples", p, p, sample_count)};
}

BoundCheck check_paouris_tail(const LogConcaveDensity& mu, double r, std::size_t sample_count, std::uint64_t seed,
                              std::optional<double> c) {
  const std::string inputs = fmt::format("{} R={:.6g}", mu.label(), r);
  double p_upper;
  if (is_standard_gaussian(mu)) {
    p_upper = gaussian_norm_tail(mu.dimension(), r);
  } else {
    const TailEstimate t = paouris_tail(mu, r, sample_count, seed);
    if (t.exact && t.probability == 0.0) {
      // No mass beyond R: holds for every c.
      BoundCheck b = make_check("paouris-tail", "", 0.0, 0.0, 0.0, 0.0, inputs + " (zero tail)", c);
      return b;
    }
    p_upper = t.upper;
  }
  return make_check("paouris-tail", "", r, 0.0, -std::log(p_upper), 0.0, inputs, c);
}

BoundCheck check_paouris_moment(const LogConcaveDensity& mu, double p, std::size_t sample_count, std::uint64_t seed,
                                std::optional<double> c) {
  const MetricResult m = paouris_moment(mu, p, sample_count, seed);
  const double rhs = std::max(std::sqrt(static_cast<double>(mu.dimension())), p);
  return make_check("paouris-moment", "", m.value, m.abs_error, rhs, 0.0, fmt::format("{} p={:g}", mu.label(), p), c);
}

MetricResult bobkov_madiman_variance(const LogConcaveDensity& mu, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 2) throw std::invalid_argument("bobkov_madiman_variance: need at least two samples");
  Rng rng(seed, stable_hash("bobkov_madiman"));
  const SampleMatrix xs = mu.sample(sample_count, rng);
  std::vector<double> v(xs.size());
  double mean = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    v[k] = mu.log_pdf(xs.row(k));
    mean += (v[k] - mean) / static_cast<double>(k + 1);
  }
  double m2 = 0.0;
  double m4 = 0.0;
  for (const double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(sample_count);
  const double var = m2 / (n - 1.0);
  const double band = kZ95 * std::sqrt(std::max(m4 / n - (m2 / n) * (m2 / n), 0.0) / n);
  return {var, band, Method::kMonteCarlo, fmt::format("Var(log f(Y)), {} samples", sample_count)};
}

BoundCheck check_bobkov_madiman(const LogConcaveDensity& mu, std::size_t sample_count, std::uint64_t seed,
                                std::optional<double> c) {
  const MetricResult v = bobkov_madiman_variance(mu, sample_count, seed);
  return make_check("bobkov-madiman", "", v.value, v.abs_error, static_cast<double>(mu.dimension()), 0.0, mu.label(),
                    c);
}

double isotropic_constant(const LogConcaveDensity& mu) {
  return std::pow(mu.max_density(), 1.0 / static_cast<double>(mu.dimension()));
}

BoundCheck check_isotropic_constant(const LogConcaveDensity& mu) {
  return make_check("isotropic-constant", "", isotropic_constant(mu), 0.0,
                    256.0 * std::sqrt(static_cast<double>(mu.dimension())), 0.0, mu.label());
}

BoundCheck check_max_entropy(const LogConcaveDensity& mu) {
  const MetricResult h = differential_entropy(mu);
  const double cap = static_cast<double>(mu.dimension()) * 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  return make_check("max-entropy", "", h.value, h.abs_error, cap, 0.0, mu.label());
}

}  // namespace lcm
