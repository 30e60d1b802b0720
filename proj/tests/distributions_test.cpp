#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "lcmetrics/distributions.hpp"

using namespace lcm;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Independent quadrature oracle over [a, b] split at the given interior points.
template <class F>
double quad(F f, std::vector<double> pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 20, 1e-14);
  }
  return total;
}

std::vector<LogConcaveDensity> catalog_1d() {
  std::vector<LogConcaveDensity> out{make_standard_gaussian(1), make_isotropic_uniform(1), make_isotropic_laplace(1)};
  for (const double t : {0.8, 0.5, 0.2, 0.1}) {
    out.push_back(convolve_interpolate(make_isotropic_uniform(1), t));
    out.push_back(convolve_interpolate(make_isotropic_laplace(1), t));
  }
  return out;
}

// Integration points covering the effective support and every kink.
std::vector<double> points_for(const Component1D& c) {
  const Interval r = c.effective_support(1e-13);
  std::vector<double> pts{r.lo};
  for (const double b : c.breakpoints()) {
    if (b > r.lo && b < r.hi) pts.push_back(b);
  }
  pts.push_back(r.hi);
  return pts;
}

}  // namespace

TEST(StandardGaussian, DensityAtOrigin) {
  const auto g1 = make_standard_gaussian(1);
  EXPECT_NEAR(g1.pdf(std::vector{0.0}), 0.3989422804014327, 1e-15);
  const auto g2 = make_standard_gaussian(2);
  EXPECT_NEAR(g2.log_pdf(std::vector{0.0, 0.0}), -std::log(2.0 * std::numbers::pi), 1e-14);
  EXPECT_TRUE(g2.is_isotropic());
}

TEST(StandardGaussian, SquaredNormMatchesDimension) {
  const auto g4 = make_standard_gaussian(4);
  const auto s = sample(g4, 100000, 11);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double r2 = 0.0;
    for (const double v : s.row(k)) r2 += v * v;
    sum += r2;
    sum2 += r2 * r2;
  }
  const double n = static_cast<double>(s.size());
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(mean, 4.0, 4.0 * sd / std::sqrt(n));
}

TEST(IsotropicUniform, ClosedForms) {
  const auto u = make_isotropic_uniform(1);
  EXPECT_NEAR(u.pdf(std::vector{0.0}), 1.0 / (2.0 * kSqrt3), 1e-15);
  EXPECT_DOUBLE_EQ(cdf_1d(u, 0.0), 0.5);
  EXPECT_NEAR(quantile_1d(u, 0.25), -kSqrt3 / 2.0, 1e-15);
  const auto& c = u.as_1d();
  EXPECT_NEAR(quad([&](double x) { return x * x * c.pdf(x); }, {-kSqrt3, kSqrt3}), 1.0, 1e-10);
}

TEST(IsotropicLaplace, ClosedForms) {
  const auto l = make_isotropic_laplace(1);
  const auto& c = l.as_1d();
  EXPECT_NEAR(c.pdf(0.0), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(quad([&](double x) { return x * x * c.pdf(x); }, {-40.0, 0.0, 40.0}), 1.0, 1e-10);
  const double analytic = 1.0 - 0.5 * std::exp(-std::numbers::sqrt2);
  EXPECT_NEAR(cdf_1d(l, 1.0), analytic, 1e-15);
  EXPECT_NEAR(quad([&](double x) { return c.pdf(x); }, {-40.0, 0.0, 1.0}), analytic, 1e-12);
}

TEST(Gaussian, CdfAtZeroIsHalf) { EXPECT_DOUBLE_EQ(cdf_1d(make_standard_gaussian(1), 0.0), 0.5); }

TEST(ConvolveInterpolate, Endpoints) {
  const auto u = make_isotropic_uniform(2);
  const auto at0 = convolve_interpolate(u, 0.0);
  const auto g = make_standard_gaussian(2);
  const std::vector<double> x{0.3, -1.1};
  EXPECT_DOUBLE_EQ(at0.log_pdf(x), g.log_pdf(x));
  const auto at1 = convolve_interpolate(u, 1.0);
  EXPECT_DOUBLE_EQ(at1.log_pdf(x), u.log_pdf(x));
}

TEST(ConvolveInterpolate, RejectsBadParameter) {
  const auto u = make_isotropic_uniform(1);
  EXPECT_THROW(convolve_interpolate(u, -0.1), std::invalid_argument);
  EXPECT_THROW(convolve_interpolate(u, 1.5), std::invalid_argument);
  EXPECT_THROW(convolve_interpolate(u, std::nan("")), std::invalid_argument);
  EXPECT_THROW(convolve_interpolate(make_uniform_box({{1.0, 1.0}}), 0.5), std::invalid_argument);
}

TEST(ConvolveInterpolate, UniformHalfwayHasUnitVariance) {
  const auto d = convolve_interpolate(make_isotropic_uniform(1), 0.5);
  const auto& c = d.as_1d();
  EXPECT_NEAR(quad([&](double x) { return x * x * c.pdf(x); }, {-12.0, 0.0, 12.0}), 1.0, 1e-8);
  EXPECT_NEAR(c.variance(), 1.0, 1e-15);
}

TEST(ConvolveInterpolate, DensityMatchesDirectConvolution) {
  // Frozen mpmath values of the law of sqrt(1 - t^2) Z + t Y at t = 1/2.
  const auto du = convolve_interpolate(make_isotropic_uniform(1), 0.5);
  EXPECT_NEAR(du.as_1d().pdf(0.0), 0.39415096205827544, 1e-14);
  const auto dl = convolve_interpolate(make_isotropic_laplace(1), 0.5);
  EXPECT_NEAR(dl.as_1d().pdf(0.7), 0.31309076412274507, 1e-14);

  // Convolution integral against the base density, at a spread of points.
  for (const double t : {0.9, 0.3}) {
    const double s = std::sqrt(1.0 - t * t);
    const auto lap = make_isotropic_laplace(1).as_1d();
    const auto d = convolve_interpolate(make_isotropic_laplace(1), t).as_1d();
    for (const double x : {-6.0, -1.3, 0.0, 0.4, 2.5, 9.0}) {
      const double oracle = quad(
          [&](double y) { return lap.pdf(y) * std::exp(-0.5 * std::pow((x - t * y) / s, 2)) / (s * std::sqrt(2 * std::numbers::pi)); },
          {-60.0, 0.0, 60.0});
      EXPECT_NEAR(d.pdf(x), oracle, 1e-13 + 1e-10 * oracle) << "t=" << t << " x=" << x;
    }
  }
}

TEST(ConvolveInterpolate, CdfIsIntegralOfDensity) {
  for (const auto& base : {make_isotropic_uniform(1), make_isotropic_laplace(1)}) {
    const auto d = convolve_interpolate(base, 0.6).as_1d();
    for (const double x : {-7.0, -2.0, -0.3, 0.0, 1.1, 4.0}) {
      const double oracle = quad([&](double y) { return d.pdf(y); }, {-40.0, std::min(x, 0.0), x});
      EXPECT_NEAR(d.cdf(x), oracle, 1e-12) << base.label() << " x=" << x;
      EXPECT_NEAR(d.cdf(x) + d.sf(x), 1.0, 1e-15);
    }
  }
}

TEST(ConvolveInterpolate, ConvergesPointwiseToGaussian) {
  for (const auto& base : {make_isotropic_uniform(1), make_isotropic_laplace(1)}) {
    const auto g = make_standard_gaussian(1).as_1d();
    double previous = INFINITY;
    for (const double t : {0.8, 0.4, 0.2, 0.1}) {
      const auto d = convolve_interpolate(base, t).as_1d();
      double gap = 0.0;
      for (double x = -6.0; x <= 6.0; x += 0.01) gap = std::max(gap, std::abs(d.pdf(x) - g.pdf(x)));
      EXPECT_LT(gap, previous) << base.label() << " t=" << t;
      previous = gap;
    }
    EXPECT_LT(previous, 0.01);
  }
}

TEST(Whiten, AffineGaussianBecomesStandard) {
  Eigen::VectorXd m(1);
  m << 3.0;
  Eigen::MatrixXd c(1, 1);
  c << 4.0;
  const auto raw = make_gaussian(m, c);
  EXPECT_FALSE(raw.is_isotropic());
  const auto w = whiten(raw, m, c);
  EXPECT_TRUE(w.is_isotropic());
  const auto g = make_standard_gaussian(1);
  for (const double x : {-2.0, 0.0, 0.7, 3.0}) EXPECT_NEAR(w.log_pdf(std::vector{x}), g.log_pdf(std::vector{x}), 1e-14);
}

TEST(Whiten, IsotropicInputUnchanged) {
  const auto l = make_isotropic_laplace(3);
  const auto w = whiten(l, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  const std::vector<double> x{0.2, -1.0, 2.2};
  EXPECT_NEAR(w.log_pdf(x), l.log_pdf(x), 1e-14);
}

TEST(Whiten, ShiftedUniformIntervalBecomesIsotropic) {
  // Uniform[0, 2 sqrt(3) sigma] with sigma = 2: mean sqrt(3) sigma, variance sigma^2.
  const double sigma = 2.0;
  const auto raw = make_uniform_box({{kSqrt3 * sigma, kSqrt3 * sigma}});
  Eigen::VectorXd m(1);
  m << kSqrt3 * sigma;
  Eigen::MatrixXd c(1, 1);
  c << sigma * sigma;
  const auto w = whiten(raw, m, c);
  const auto& comp = w.as_1d();
  EXPECT_NEAR(comp.support().lo, -kSqrt3, 1e-14);
  EXPECT_NEAR(comp.support().hi, kSqrt3, 1e-14);
  EXPECT_NEAR(comp.pdf(0.0), 1.0 / (2.0 * kSqrt3), 1e-15);
  EXPECT_NEAR(quad([&](double x) { return comp.pdf(x); }, {-kSqrt3, kSqrt3}), 1.0, 1e-13);
}

TEST(Whiten, CorrelatedGaussianIn2d) {
  Eigen::VectorXd m(2);
  m << 1.0, -2.0;
  Eigen::MatrixXd c(2, 2);
  c << 2.0, 0.6, 0.6, 1.0;
  const auto raw = make_gaussian(m, c);
  EXPECT_FALSE(raw.is_product());
  EXPECT_TRUE(raw.covariance().isApprox(c, 1e-12));
  const auto w = whiten(raw, m, c);
  EXPECT_TRUE(w.covariance().isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-12));
  EXPECT_LT(w.mean().norm(), 1e-12);
  const auto g = make_standard_gaussian(2);
  const std::vector<double> x{0.4, -0.9};
  EXPECT_NEAR(w.log_pdf(x), g.log_pdf(x), 1e-12);
}

TEST(Whiten, RejectsNonSpdCovariance) {
  const auto g = make_standard_gaussian(2);
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(whiten(g, Eigen::VectorXd::Zero(2), bad), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(whiten(g, Eigen::VectorXd::Zero(2), asym), std::invalid_argument);
  EXPECT_THROW(whiten(g, Eigen::VectorXd::Zero(2), -Eigen::MatrixXd::Identity(2, 2)), std::invalid_argument);
}

TEST(Construction, RejectsDegenerateInputs) {
  EXPECT_THROW(make_standard_gaussian(0), std::invalid_argument);
  EXPECT_THROW(make_isotropic_uniform(0), std::invalid_argument);
  EXPECT_THROW(Component1D(Uniform1D{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Component1D(Laplace1D{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Component1D(Gaussian1D{0.0, -1.0}), std::invalid_argument);
}

TEST(OneDimensionalQueries, RejectWrongInputs) {
  const auto g2 = make_standard_gaussian(2);
  EXPECT_THROW(cdf_1d(g2, 0.0), std::invalid_argument);
  EXPECT_THROW(quantile_1d(g2, 0.5), std::invalid_argument);
  const auto g1 = make_standard_gaussian(1);
  EXPECT_THROW(quantile_1d(g1, 0.0), std::invalid_argument);
  EXPECT_THROW(quantile_1d(g1, 1.0), std::invalid_argument);
}

TEST(Sampling, DeterministicForFixedSeed) {
  const auto d = convolve_interpolate(make_isotropic_laplace(3), 0.4);
  const auto a = sample(d, 500, 42);
  const auto b = sample(d, 500, 42);
  EXPECT_EQ(a.data, b.data);
  const auto c = sample(d, 500, 43);
  EXPECT_NE(a.data, c.data);
}

TEST(Sampling, GaussianMeanWithinBand) {
  const auto s = sample(make_standard_gaussian(1), 100000, 5);
  double sum = 0.0;
  for (const double v : s.data) sum += v;
  EXPECT_LT(std::abs(sum / 1e5), 4.0 / std::sqrt(1e5));
}

TEST(Sampling, UniformStaysInSupport) {
  const auto s = sample(make_isotropic_uniform(3), 20000, 9);
  for (const double v : s.data) {
    EXPECT_GE(v, -kSqrt3);
    EXPECT_LE(v, kSqrt3);
  }
}

TEST(CatalogProperties, NormalizedWithUnitMoments) {
  for (const auto& d : catalog_1d()) {
    const auto& c = d.as_1d();
    const auto pts = points_for(c);
    EXPECT_NEAR(quad([&](double x) { return c.pdf(x); }, pts), 1.0, 1e-9) << d.label();
    EXPECT_NEAR(quad([&](double x) { return x * c.pdf(x); }, pts), 0.0, 1e-9) << d.label();
    EXPECT_NEAR(quad([&](double x) { return x * x * c.pdf(x); }, pts), 1.0, 1e-8) << d.label();
    EXPECT_TRUE(d.is_isotropic());
  }
}

TEST(CatalogProperties, LogConcaveAlongRandomSegments) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> point(-6.0, 6.0);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (const auto& d : catalog_1d()) {
    const auto& c = d.as_1d();
    for (int k = 0; k < 1000; ++k) {
      double x = point(gen);
      double y = point(gen);
      if (std::isinf(c.log_pdf(x)) || std::isinf(c.log_pdf(y))) continue;
      const double lam = weight(gen);
      const double mid = c.log_pdf(lam * x + (1.0 - lam) * y);
      EXPECT_GE(mid, lam * c.log_pdf(x) + (1.0 - lam) * c.log_pdf(y) - 1e-9) << d.label();
    }
  }
}

TEST(CatalogProperties, QuantileInvertsCdf) {
  for (const auto& d : catalog_1d()) {
    const auto& c = d.as_1d();
    const double lo = c.quantile(0.001);
    const double hi = c.quantile(0.999);
    for (int i = 0; i <= 200; ++i) {
      const double x = lo + (hi - lo) * i / 200.0;
      if (c.pdf(x) == 0.0) continue;
      EXPECT_NEAR(c.quantile(c.cdf(x)), x, 1e-8) << d.label() << " x=" << x;
    }
  }
}

TEST(CatalogProperties, MonteCarloCovarianceIsIdentity) {
  for (const auto& d : {make_standard_gaussian(3), make_isotropic_uniform(3), make_isotropic_laplace(3),
                        convolve_interpolate(make_isotropic_uniform(3), 0.5)}) {
    const auto s = sample(d, 100000, 77);
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        double sum = 0.0;
        double sum2 = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
          const double v = s.row(k)[i] * s.row(k)[j];
          sum += v;
          sum2 += v * v;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sum2 / n - mean * mean);
        EXPECT_NEAR(mean, i == j ? 1.0 : 0.0, 4.0 * sd / std::sqrt(n)) << d.label() << " (" << i << "," << j << ")";
      }
    }
  }
}

TEST(CatalogProperties, MaxDensityAtCentre) {
  EXPECT_NEAR(make_isotropic_laplace(4).max_density(), std::pow(1.0 / std::numbers::sqrt2, 4), 1e-15);
  const auto d = convolve_interpolate(make_isotropic_uniform(1), 0.7).as_1d();
  EXPECT_GE(d.max_density(), d.pdf(0.01));
  EXPECT_GE(d.max_density(), d.pdf(-0.3));
}

TEST(GridFunctionTest, InterpolatesAndIntegrates) {
  const GridFunction f({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0}, -1.0);
  EXPECT_DOUBLE_EQ(f(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f(2.0), 1.0);
  EXPECT_DOUBLE_EQ(f(-1.0), -1.0);
  EXPECT_DOUBLE_EQ(f(3.5), -1.0);
  EXPECT_DOUBLE_EQ(f.trapezoid_integral(), 3.0);
  EXPECT_THROW(GridFunction({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(GridFunction({0.0, 1.0}, {1.0}), std::invalid_argument);
}
