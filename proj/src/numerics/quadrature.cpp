#include "lcmetrics/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>

namespace lcm::numerics {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

double erfcx(double z) {
  if (z < 25.0) return std::exp(z * z) * std::erfc(z);
  // Asymptotic series; relative error below 1e-15 for z >= 25.
  const double r = 1.0 / (z * z);
  const double series = 1.0 + r * (-0.5 + r * (0.75 + r * (-1.875 + r * 6.5625)));
  return series / (z * std::sqrt(std::numbers::pi));
}

namespace {

Integral adaptive_gk(const Fn& f, double a, double b, double rel_tol, double abs_tol, int depth) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &error, &l1);
  if (depth == 0 || error <= std::max(rel_tol * l1, abs_tol)) return {value, error};
  const double m = 0.5 * (a + b);
  const Integral left = adaptive_gk(f, a, m, rel_tol, 0.5 * abs_tol, depth - 1);
  const Integral right = adaptive_gk(f, m, b, rel_tol, 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace

Integral integrate(const Fn& f, double a, double b, double rel_tol, double abs_tol) {
  if (!(b > a)) return {};
  return adaptive_gk(f, a, b, rel_tol, abs_tol, 18);
}

Integral integrate_pieces(const Fn& f, const std::vector<double>& points, double rel_tol) {
  Integral total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Integral piece = integrate(f, points[i], points[i + 1], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

Integral integrate_endpoint_singular(const Fn& f, double a, double b, double rel_tol) {
  if (!(b > a)) return {};
  static boost::math::quadrature::tanh_sinh<double> rule(12);
  double error = 0.0;
  double l1 = 0.0;
  const double value = rule.integrate(f, a, b, rel_tol, &error, &l1);
  return {value, error};
}

double bracketed_root(const Fn& g, double a, double b, double abs_tol) {
  double ga = g(a);
  double gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  // Bisection to a coarse bracket, then TOMS 748 for the tail.
  std::uintmax_t max_iter = 200;
  auto done = [abs_tol](double lo, double hi) { return std::abs(hi - lo) <= abs_tol; };
  try {
    const auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, done, max_iter);
    return 0.5 * (r.first + r.second);
  } catch (const std::exception&) {
    for (int i = 0; i < 200 && !done(a, b); ++i) {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if ((gm < 0) == (ga < 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }
}

std::vector<double> sign_changes(const Fn& g, double a, double b, int n_scan) {
  std::vector<double> roots;
  if (!(b > a) || n_scan < 1) return roots;
  const double h = (b - a) / n_scan;
  double x0 = a;
  double g0 = g(x0);
  for (int i = 1; i <= n_scan; ++i) {
    const double x1 = (i == n_scan) ? b : a + i * h;
    const double g1 = g(x1);
    if (g0 != 0.0 && g1 != 0.0 && (g0 < 0) != (g1 < 0)) {
      roots.push_back(bracketed_root(g, x0, x1));
    } else if (g1 == 0.0 && i < n_scan && g0 != 0.0) {
      roots.push_back(x1);
    }
    x0 = x1;
    g0 = g1;
  }
  return roots;
}

std::vector<double> partition(std::vector<double> points, double lo, double hi) {
  std::erase_if(points, [lo, hi](double x) { return !(x > lo && x < hi); });
  points.push_back(lo);
  points.push_back(hi);
  std::sort(points.begin(), points.end());
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> out;
  for (const double x : points) {
    if (out.empty() || x - out.back() > 1e-14 * scale) out.push_back(x);
  }
  if (out.back() != hi) out.back() = hi;
  return out;
}

}  // namespace lcm::numerics
