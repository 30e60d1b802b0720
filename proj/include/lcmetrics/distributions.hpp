#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lcmetrics/rng.hpp"

namespace lcm {

struct Interval {
  double lo;
  double hi;

  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] double length() const { return hi - lo; }
};

struct Gaussian1D {
  double mean = 0.0;
  double sd = 1.0;
};

struct Uniform1D {
  double center = 0.0;
  double half_width = 1.0;
};

// Two-sided exponential with density (rate / 2) exp(-rate |x - center|).
struct Laplace1D {
  double center = 0.0;
  double rate = 1.0;
};

// Law of sigma * Z + Y with Z standard normal and Y ~ base, independent.
// Gaussian bases are never stored here; they merge into a Gaussian1D.
struct Smoothed1D {
  double sigma = 1.0;
  std::variant<Uniform1D, Laplace1D> base;
};

/// A one-dimensional log-concave law from the catalog. Immutable; every
/// query is closed form except the quantile of a Smoothed1D, which is
/// bracketed root-finding on the CDF.
class Component1D {
 public:
  using Variant = std::variant<Gaussian1D, Uniform1D, Laplace1D, Smoothed1D>;

  // Throws std::invalid_argument on zero/negative scale parameters.
  explicit Component1D(Variant v);

  [[nodiscard]] const Variant& variant() const { return v_; }

  [[nodiscard]] double log_pdf(double x) const;
  [[nodiscard]] double pdf(double x) const;
  [[nodiscard]] double cdf(double x) const;
  // 1 - cdf(x), accurate in the upper tail.
  [[nodiscard]] double sf(double x) const;
  // Absolute accuracy 1e-10 for u in (0, 1).
  [[nodiscard]] double quantile(double u) const;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
  [[nodiscard]] Interval support() const;
  // [quantile(eps), quantile(1 - eps)] clipped to the support.
  [[nodiscard]] Interval effective_support(double eps = 1e-12) const;
  // Points where the density or one of its low derivatives is not smooth.
  [[nodiscard]] std::vector<double> breakpoints() const;
  // sup_x pdf(x); attained at the centre for every catalog family.
  [[nodiscard]] double max_density() const;

  // Law of scale * X + shift. scale must be nonzero.
  [[nodiscard]] Component1D affine(double scale, double shift) const;

  [[nodiscard]] double sample(Rng& rng) const;
  [[nodiscard]] std::string describe() const;

 private:
  Variant v_;
};

/// Row-major block of points in R^n.
struct SampleMatrix {
  std::size_t dimension = 0;
  std::vector<double> data;

  [[nodiscard]] std::size_t size() const { return dimension == 0 ? 0 : data.size() / dimension; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data.data() + i * dimension, dimension};
  }
};

/// A log-concave probability measure on R^n: the law of A X + b where X has
/// independent coordinates drawn from catalog components. When A is absent
/// the measure is a plain product.
class LogConcaveDensity {
 public:
  LogConcaveDensity(std::vector<Component1D> factors, bool isotropic, std::string label);

  [[nodiscard]] std::size_t dimension() const { return factors_.size(); }
  [[nodiscard]] bool is_isotropic() const { return isotropic_; }
  [[nodiscard]] bool is_product() const { return !linear_.has_value(); }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const std::vector<Component1D>& factors() const { return factors_; }

  // The single factor of a 1-D measure; throws std::invalid_argument otherwise.
  [[nodiscard]] const Component1D& as_1d() const;

  [[nodiscard]] double log_pdf(std::span<const double> x) const;
  [[nodiscard]] double pdf(std::span<const double> x) const;

  [[nodiscard]] Eigen::VectorXd mean() const;
  [[nodiscard]] Eigen::MatrixXd covariance() const;
  // Product families: per-coordinate support boxes. Empty for general affine images.
  [[nodiscard]] std::vector<Interval> support_box() const;
  [[nodiscard]] double max_density() const;
  // log |det A|; zero for products.
  [[nodiscard]] double log_abs_det() const;

  [[nodiscard]] SampleMatrix sample(std::size_t count, Rng& rng) const;

  // Used by whiten() to build non-product images.
  LogConcaveDensity with_affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool isotropic,
                                std::string label) const;

 private:
  struct Affine {
    Eigen::MatrixXd a;
    Eigen::MatrixXd a_inv;
    Eigen::VectorXd b;
    double log_abs_det = 0.0;
  };

  std::vector<Component1D> factors_;
  std::optional<Affine> linear_;
  bool isotropic_ = false;
  std::string label_;
};

// Catalog constructors. All throw std::invalid_argument for n == 0.
LogConcaveDensity make_standard_gaussian(std::size_t n);
LogConcaveDensity make_isotropic_uniform(std::size_t n);
LogConcaveDensity make_isotropic_laplace(std::size_t n);

// Raw (generally non-isotropic) members, for whiten().
LogConcaveDensity make_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);
LogConcaveDensity make_uniform_box(std::vector<Uniform1D> coords);
LogConcaveDensity make_laplace_product(std::vector<Laplace1D> coords);

/// Law of X + s Z with Z standard normal independent of X ~ c. Exact: the
/// result is again a catalog component. s must be >= 0.
Component1D add_gaussian_noise(const Component1D& c, double s);

/// Law of sqrt(1 - t^2) Z + t Y with Z ~ gamma_n and Y ~ base independent.
/// base must be an isotropic product measure; t must lie in [0, 1].
LogConcaveDensity convolve_interpolate(const LogConcaveDensity& base, double t);

/// Pushforward under x -> covariance^{-1/2} (x - mean).
/// Throws std::invalid_argument if covariance is not symmetric positive definite.
LogConcaveDensity whiten(const LogConcaveDensity& raw, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& covariance);

// 1-D conveniences; throw std::invalid_argument when dimension != 1 or u is outside (0, 1).
double cdf_1d(const LogConcaveDensity& d, double x);
double quantile_1d(const LogConcaveDensity& d, double u);

// count i.i.d. draws; the stream is a pure function of seed.
SampleMatrix sample(const LogConcaveDensity& d, std::size_t count, std::uint64_t seed);

/// A function tabulated on a strictly increasing grid, linearly interpolated
/// between nodes and equal to outside_value beyond them. Integrals use the
/// trapezoid rule over the nodes.
class GridFunction {
 public:
  GridFunction(std::vector<double> nodes, std::vector<double> values, double outside_value = 0.0);

  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double outside_value() const { return outside_; }

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double trapezoid_integral() const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  double outside_;
};

}  // namespace lcm
