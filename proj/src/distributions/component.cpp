#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "lcmetrics/distributions.hpp"
#include "lcmetrics/numerics.hpp"

namespace lcm {
namespace {

using numerics::erfcx;
using numerics::normal_cdf;
using numerics::normal_pdf;
using numerics::normal_quantile;
using numerics::normal_sf;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// log(1 - Phi(z)).
double log_normal_sf(double z) {
  if (z < 5.0) return std::log(normal_sf(z));
  return -0.5 * z * z + std::log(0.5 * erfcx(z / std::numbers::sqrt2));
}

// Antiderivative of Phi: psi(z) = z Phi(z) + phi(z), evaluated without
// cancellation in the lower tail via the Mills ratio.
double psi(double z) {
  if (z > 0.0) return z + psi(-z);
  const double a = -z;
  const double mills = std::sqrt(std::numbers::pi / 2.0) * erfcx(a / std::numbers::sqrt2);
  return normal_pdf(a) * (1.0 - a * mills);
}

// ---- Gaussian smoothing of a uniform on [c - h, c + h] ---------------------

double smoothed_uniform_pdf(double sigma, const Uniform1D& b, double x) {
  const double a = std::abs(x - b.center);
  const double h = b.half_width;
  return (normal_sf((a - h) / sigma) - normal_sf((a + h) / sigma)) / (2.0 * h);
}

double smoothed_uniform_log_pdf(double sigma, const Uniform1D& b, double x) {
  const double a = std::abs(x - b.center);
  const double h = b.half_width;
  const double z1 = (a - h) / sigma;
  if (z1 < 5.0) return std::log(smoothed_uniform_pdf(sigma, b, x));
  const double z2 = (a + h) / sigma;
  const double l1 = log_normal_sf(z1);
  const double l2 = log_normal_sf(z2);
  return l1 + std::log1p(-std::exp(l2 - l1)) - std::log(2.0 * h);
}

// P(X <= c + u) for u <= 0.
double smoothed_uniform_lower(double sigma, const Uniform1D& b, double u) {
  const double h = b.half_width;
  return sigma / (2.0 * h) * (psi((u + h) / sigma) - psi((u - h) / sigma));
}

// ---- Gaussian smoothing of a Laplace(c, rate) ------------------------------

// exp(rate^2 sigma^2 / 2 - rate u) Phi(u / sigma - rate sigma), overflow-free.
double laplace_tail_term(double sigma, double rate, double u) {
  const double s = u / sigma - rate * sigma;
  if (s < 0.0) {
    return 0.5 * erfcx(-s / std::numbers::sqrt2) * std::exp(-0.5 * (u / sigma) * (u / sigma));
  }
  return std::exp(0.5 * rate * rate * sigma * sigma - rate * u) * normal_cdf(s);
}

double smoothed_laplace_pdf(double sigma, const Laplace1D& b, double x) {
  const double u = x - b.center;
  return 0.5 * b.rate *
         (laplace_tail_term(sigma, b.rate, u) + laplace_tail_term(sigma, b.rate, -u));
}

// P(X <= c + u) for u <= 0.
double smoothed_laplace_lower(double sigma, const Laplace1D& b, double u) {
  const double v = normal_cdf(u / sigma) - 0.5 * laplace_tail_term(sigma, b.rate, u) +
                   0.5 * laplace_tail_term(sigma, b.rate, -u);
  return std::max(v, 0.0);
}

double base_center(const std::variant<Uniform1D, Laplace1D>& base) {
  return std::visit([](const auto& b) { return b.center; }, base);
}

// P(X <= center + u) for u <= 0.
double smoothed_lower(const Smoothed1D& s, double u) {
  return std::visit(Overloaded{
                        [&](const Uniform1D& b) { return smoothed_uniform_lower(s.sigma, b, u); },
                        [&](const Laplace1D& b) { return smoothed_laplace_lower(s.sigma, b, u); },
                    },
                    s.base);
}

double smoothed_cdf(const Smoothed1D& s, double x) {
  const double u = x - base_center(s.base);
  return u <= 0.0 ? smoothed_lower(s, u) : 1.0 - smoothed_lower(s, -u);
}

double smoothed_sf(const Smoothed1D& s, double x) {
  const double u = x - base_center(s.base);
  return u >= 0.0 ? smoothed_lower(s, -u) : 1.0 - smoothed_lower(s, u);
}

double base_spread(const std::variant<Uniform1D, Laplace1D>& base) {
  return std::visit(Overloaded{
                        [](const Uniform1D& b) { return b.half_width; },
                        [](const Laplace1D& b) { return 1.0 / b.rate; },
                    },
                    base);
}

double smoothed_pdf(const Smoothed1D& s, double x) {
  return std::visit(Overloaded{
                        [&](const Uniform1D& b) { return smoothed_uniform_pdf(s.sigma, b, x); },
                        [&](const Laplace1D& b) { return smoothed_laplace_pdf(s.sigma, b, x); },
                    },
                    s.base);
}

double smoothed_quantile(const Smoothed1D& s, double u) {
  const double c = base_center(s.base);
  const double p = std::min(u, 1.0 - u);
  if (p == 0.5) return c;
  double span = base_spread(s.base) + s.sigma;
  while (smoothed_lower(s, -span) > p) span *= 2.0;
  // lower(-w) decreases in w with derivative -pdf(c - w).
  const auto f = [&](double w) { return std::make_pair(smoothed_lower(s, -w) - p, -smoothed_pdf(s, c - w)); };
  const double var = s.sigma * s.sigma + std::pow(base_spread(s.base), 2);
  const double guess = std::clamp(-std::sqrt(var) * normal_quantile(p), 0.0, span);
  std::uintmax_t iters = 100;
  const double w = boost::math::tools::newton_raphson_iterate(f, guess, 0.0, span, 50, iters);
  return u < 0.5 ? c - w : c + w;
}

}  // namespace

Component1D::Component1D(Variant v) : v_(std::move(v)) {
  const bool ok = std::visit(
      Overloaded{
          [](const Gaussian1D& g) { return std::isfinite(g.mean) && positive_finite(g.sd); },
          [](const Uniform1D& u) { return std::isfinite(u.center) && positive_finite(u.half_width); },
          [](const Laplace1D& l) { return std::isfinite(l.center) && positive_finite(l.rate); },
          [](const Smoothed1D& s) {
            const bool base_ok = std::visit(
                Overloaded{
                    [](const Uniform1D& u) {
                      return std::isfinite(u.center) && positive_finite(u.half_width);
                    },
                    [](const Laplace1D& l) {
                      return std::isfinite(l.center) && positive_finite(l.rate);
                    },
                },
                s.base);
            return positive_finite(s.sigma) && base_ok;
          },
      },
      v_);
  if (!ok) throw std::invalid_argument("component: scale parameters must be positive and finite");
}

double Component1D::log_pdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const Gaussian1D& g) {
            const double z = (x - g.mean) / g.sd;
            return -0.5 * z * z - std::log(g.sd) - kLogSqrt2Pi;
          },
          [x](const Uniform1D& u) {
            return std::abs(x - u.center) <= u.half_width ? -std::log(2.0 * u.half_width)
                                                          : kNegInf;
          },
          [x](const Laplace1D& l) {
            return std::log(0.5 * l.rate) - l.rate * std::abs(x - l.center);
          },
          [x](const Smoothed1D& s) {
            return std::visit(
                Overloaded{
                    [&](const Uniform1D& b) { return smoothed_uniform_log_pdf(s.sigma, b, x); },
                    [&](const Laplace1D& b) { return std::log(smoothed_laplace_pdf(s.sigma, b, x)); },
                },
                s.base);
          },
      },
      v_);
}

double Component1D::pdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const Gaussian1D& g) { return normal_pdf((x - g.mean) / g.sd) / g.sd; },
          [x](const Uniform1D& u) {
            return std::abs(x - u.center) <= u.half_width ? 0.5 / u.half_width : 0.0;
          },
          [x](const Laplace1D& l) { return 0.5 * l.rate * std::exp(-l.rate * std::abs(x - l.center)); },
          [x](const Smoothed1D& s) {
            return std::visit(
                Overloaded{
                    [&](const Uniform1D& b) { return smoothed_uniform_pdf(s.sigma, b, x); },
                    [&](const Laplace1D& b) { return smoothed_laplace_pdf(s.sigma, b, x); },
                },
                s.base);
          },
      },
      v_);
}

double Component1D::cdf(double x) const {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return std::visit(
      Overloaded{
          [x](const Gaussian1D& g) { return normal_cdf((x - g.mean) / g.sd); },
          [x](const Uniform1D& u) {
            return std::clamp((x - u.center + u.half_width) / (2.0 * u.half_width), 0.0, 1.0);
          },
          [x](const Laplace1D& l) {
            const double d = x - l.center;
            return d < 0.0 ? 0.5 * std::exp(l.rate * d) : 1.0 - 0.5 * std::exp(-l.rate * d);
          },
          [x](const Smoothed1D& s) { return smoothed_cdf(s, x); },
      },
      v_);
}

double Component1D::sf(double x) const {
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return std::visit(
      Overloaded{
          [x](const Gaussian1D& g) { return normal_sf((x - g.mean) / g.sd); },
          [x](const Uniform1D& u) {
            return std::clamp((u.center + u.half_width - x) / (2.0 * u.half_width), 0.0, 1.0);
          },
          [x](const Laplace1D& l) {
            const double d = x - l.center;
            return d > 0.0 ? 0.5 * std::exp(-l.rate * d) : 1.0 - 0.5 * std::exp(l.rate * d);
          },
          [x](const Smoothed1D& s) { return smoothed_sf(s, x); },
      },
      v_);
}

double Component1D::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile: u must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [u](const Gaussian1D& g) { return g.mean + g.sd * normal_quantile(u); },
          [u](const Uniform1D& un) { return un.center - un.half_width + 2.0 * un.half_width * u; },
          [u](const Laplace1D& l) {
            return u < 0.5 ? l.center + std::log(2.0 * u) / l.rate
                           : l.center - std::log(2.0 * (1.0 - u)) / l.rate;
          },
          [u](const Smoothed1D& s) { return smoothed_quantile(s, u); },
      },
      v_);
}

double Component1D::mean() const {
  return std::visit(Overloaded{
                        [](const Gaussian1D& g) { return g.mean; },
                        [](const Smoothed1D& s) { return base_center(s.base); },
                        [](const auto& b) { return b.center; },
                    },
                    v_);
}

double Component1D::variance() const {
  return std::visit(
      Overloaded{
          [](const Gaussian1D& g) { return g.sd * g.sd; },
          [](const Uniform1D& u) { return u.half_width * u.half_width / 3.0; },
          [](const Laplace1D& l) { return 2.0 / (l.rate * l.rate); },
          [](const Smoothed1D& s) {
            return s.sigma * s.sigma + Component1D(std::visit([](const auto& b) -> Variant { return b; },
                                                              s.base))
                                           .variance();
          },
      },
      v_);
}

Interval Component1D::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* u = std::get_if<Uniform1D>(&v_)) {
    return {u->center - u->half_width, u->center + u->half_width};
  }
  return {-inf, inf};
}

Interval Component1D::effective_support(double eps) const {
  if (const auto* u = std::get_if<Uniform1D>(&v_)) {
    return {u->center - u->half_width, u->center + u->half_width};
  }
  // The remaining families are symmetric about their centre; mirroring keeps
  // eps below the resolution of 1 - eps usable.
  const double lo = quantile(eps);
  return {lo, 2.0 * mean() - lo};
}

std::vector<double> Component1D::breakpoints() const {
  return std::visit(Overloaded{
                        [](const Gaussian1D& g) { return std::vector<double>{g.mean}; },
                        [](const Uniform1D& u) {
                          return std::vector<double>{u.center - u.half_width,
                                                     u.center + u.half_width};
                        },
                        [](const Laplace1D& l) { return std::vector<double>{l.center}; },
                        [](const Smoothed1D& s) { return std::vector<double>{base_center(s.base)}; },
                    },
                    v_);
}

double Component1D::max_density() const {
  return std::visit(Overloaded{
                        [](const Gaussian1D& g) { return 1.0 / (g.sd * std::sqrt(2.0 * std::numbers::pi)); },
                        [](const Uniform1D& u) { return 0.5 / u.half_width; },
                        [](const Laplace1D& l) { return 0.5 * l.rate; },
                        [this](const Smoothed1D& s) { return pdf(base_center(s.base)); },
                    },
                    v_);
}

Component1D Component1D::affine(double scale, double shift) const {
  if (!(std::isfinite(scale) && scale != 0.0 && std::isfinite(shift))) {
    throw std::invalid_argument("component affine: scale must be finite and nonzero");
  }
  const double a = std::abs(scale);
  auto map_uniform = [&](const Uniform1D& u) { return Uniform1D{scale * u.center + shift, a * u.half_width}; };
  auto map_laplace = [&](const Laplace1D& l) { return Laplace1D{scale * l.center + shift, l.rate / a}; };
  return Component1D(std::visit(
      Overloaded{
          [&](const Gaussian1D& g) -> Variant { return Gaussian1D{scale * g.mean + shift, a * g.sd}; },
          [&](const Uniform1D& u) -> Variant { return map_uniform(u); },
          [&](const Laplace1D& l) -> Variant { return map_laplace(l); },
          [&](const Smoothed1D& s) -> Variant {
            return Smoothed1D{a * s.sigma,
                              std::visit(Overloaded{
                                             [&](const Uniform1D& u) -> std::variant<Uniform1D, Laplace1D> {
                                               return map_uniform(u);
                                             },
                                             [&](const Laplace1D& l) -> std::variant<Uniform1D, Laplace1D> {
                                               return map_laplace(l);
                                             },
                                         },
                                         s.base)};
          },
      },
      v_));
}

double Component1D::sample(Rng& rng) const {
  if (const auto* s = std::get_if<Smoothed1D>(&v_)) {
    const double z = rng.normal();
    const Component1D base(std::visit([](const auto& b) -> Variant { return b; }, s->base));
    return s->sigma * z + base.sample(rng);
  }
  return quantile(rng.uniform01());
}

std::string Component1D::describe() const {
  auto base_text = [](const std::variant<Uniform1D, Laplace1D>& base) {
    return std::visit(Overloaded{
                          [](const Uniform1D& u) { return fmt::format("U({},{})", u.center, u.half_width); },
                          [](const Laplace1D& l) { return fmt::format("Lap({},{})", l.center, l.rate); },
                      },
                      base);
  };
  return std::visit(
      Overloaded{
          [](const Gaussian1D& g) { return fmt::format("N({},{})", g.mean, g.sd); },
          [](const Uniform1D& u) { return fmt::format("U({},{})", u.center, u.half_width); },
          [](const Laplace1D& l) { return fmt::format("Lap({},{})", l.center, l.rate); },
          [&](const Smoothed1D& s) { return fmt::format("N(0,{})*{}", s.sigma, base_text(s.base)); },
      },
      v_);
}

}  // namespace lcm
