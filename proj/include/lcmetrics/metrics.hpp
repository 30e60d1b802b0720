#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "lcmetrics/distributions.hpp"

namespace lcm {

enum class Method { kQuadrature, kQuantileQuadrature, kGridLp, kMonteCarlo, kClosedForm };

std::string_view to_string(Method m);

/// A computed distance. For Monte Carlo results abs_error is a 95% half-width.
/// An infinite relative entropy is carried as value = +inf, never thrown.
struct MetricResult {
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::kQuadrature;
  std::string detail;

  [[nodiscard]] bool is_infinite() const { return std::isinf(value); }
};

struct MonteCarloOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 0;
};

// ---- one dimension: exact up to quadrature error -------------------------

// d_TV = integral of |f_mu - f_nu|, in [0, 2].
MetricResult tv_distance_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu);
MetricResult kolmogorov_distance_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu);
// Discretized bounded-Lipschitz dual on grid_size cells (>= 16), with the
// kinks of both laws added as cell boundaries. abs_error is the larger change
// over the last two grid halvings.
MetricResult bl_distance_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu, std::size_t grid_size);
// W_p through the quantile coupling, p >= 1.
MetricResult wasserstein_p_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu, double p);
// Integral of |F_mu - F_nu|; the Kantorovich dual of W_1 on the line.
MetricResult w1_dual_1d(const LogConcaveDensity& mu, const LogConcaveDensity& nu);

/// Exact maximum of sum_i g_i * mass_difference_i subject to |g_i| <= 1 and
/// |g_{i+1} - g_i| <= nodes_{i+1} - nodes_i. nodes must be strictly increasing.
double bl_dual_on_grid(std::span<const double> nodes, std::span<const double> mass_difference);

/// Cell-centred discretization of [lo, hi] into cells; the outer cells absorb
/// the tails. Returns the exact discrete dual value.
double bl_dual_for_measures(const Component1D& mu, const Component1D& nu, double lo, double hi,
                            std::size_t cells);

// ---- any dimension --------------------------------------------------------

// Monte Carlo estimate of the integral of |f_mu - f_nu| with the balanced
// mixture of mu and nu as proposal.
MetricResult tv_distance_nd(const LogConcaveDensity& mu, const LogConcaveDensity& nu,
                            std::size_t sample_count, std::uint64_t seed);

// Product measures only. Value of the coordinatewise quantile coupling:
// exact W_p for p = 2, an upper bound on W_p otherwise (exact moments for
// p = 4, Monte Carlo for other p).
MetricResult wasserstein_p_nd_upper(const LogConcaveDensity& mu, const LogConcaveDensity& nu, double p,
                                    std::size_t sample_count, std::uint64_t seed);

// H(mu | nu). Quadrature in 1-D and for pairs of products, Monte Carlo
// otherwise. Returns +inf when mu charges a region nu does not.
MetricResult relative_entropy(const LogConcaveDensity& mu, const LogConcaveDensity& nu,
                              const MonteCarloOptions& mc = {});

// -E log f(Y); exact by coordinate decomposition of the product structure.
MetricResult differential_entropy(const LogConcaveDensity& mu);
MetricResult differential_entropy_mc(const LogConcaveDensity& mu, std::size_t sample_count, std::uint64_t seed);

/// Bracket on d_BL in n dimensions. lower: best of a finite family of
/// test functions with ||g||_BL <= 1; upper: min(d_TV, W_1) upper estimates.
struct BlSandwich {
  MetricResult lower;
  MetricResult upper;
};

BlSandwich bl_sandwich_nd(const LogConcaveDensity& mu, const LogConcaveDensity& nu, std::size_t grid_size,
                          std::size_t sample_count, std::uint64_t seed);

// Interval holding essentially all mass of both components.
Interval common_range(const Component1D& a, const Component1D& b, double eps = 1e-12);

}  // namespace lcm
