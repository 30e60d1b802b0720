#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>
#include <gtest/gtest.h>

#include "lcmetrics/bounds.hpp"
#include "lcmetrics/numerics.hpp"

using namespace lcm;

namespace {

// Frozen values from tests/oracles/compute_oracles.py.
constexpr double kTvGaussUniform = 0.39535591803506277;
constexpr double kKlLaplaceGauss = 0.072364942924700087;
constexpr double kGapGauss[] = {0.071793648831263746, 0.018979920508751244, 0.0048153675988916901,
                                0.0012083436644353273};
constexpr double kTs[] = {0.4, 0.2, 0.1, 0.05};
constexpr double kGapUniform02 = 0.092131773192356128;
constexpr double kChi4Tail6 = 2.8936961514953994e-7;

const MetricOptions kOpt{2048, 50000, 1};

}  // namespace

TEST(MinLemma, WorkedExamples) {
  const auto a = min_lemma_bound(1.0, std::exp(2.0), 1.0, 2.0);
  EXPECT_NEAR(a.t_star, 2.0, 1e-15);
  EXPECT_NEAR(a.value, 5.0, 1e-14);
  EXPECT_NEAR(a.bound, 5.0, 1e-14);
  const auto b = min_lemma_bound(1.0, 1.0, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(b.t_star, 3.0);
  EXPECT_NEAR(b.value, 3.0 + std::exp(-3.0), 1e-15);
  EXPECT_DOUBLE_EQ(b.bound, 4.0);
  EXPECT_THROW(min_lemma_bound(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(min_lemma_bound(1.0, 1.0, -1.0, 1.0), std::invalid_argument);
}

TEST(MinLemma, RandomInputsNeverExceedBound) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> logu(-5.0, 5.0);
  std::uniform_real_distribution<double> kk(0.1, 4.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = std::exp(logu(gen));
    const double b = std::exp(2.0 * logu(gen));
    const double m = std::exp(0.5 * logu(gen));
    const double k = kk(gen);
    const auto r = min_lemma_bound(a, b, m, k);
    ASSERT_LE(r.value, r.bound) << a << " " << b << " " << m << " " << k;
    ASSERT_GE(r.t_star, m);
    // The infimum over t >= M never exceeds the value at t_star.
    const auto f = [&](double t) { return a * std::pow(t, k) + b * std::exp(-t); };
    const auto best = boost::math::tools::brent_find_minima(f, m, r.t_star + 1.0, 52);
    ASSERT_LE(std::min(best.second, f(m)), r.value * (1.0 + 1e-12));
  }
}

TEST(FitConstant, RatioDefinitionAndErrors) {
  const BoundCheck one = make_check("tv-bl", "", 2.0, 0.0, 1.0, 0.0, "x");
  const std::vector<BoundCheck> single{one};
  EXPECT_DOUBLE_EQ(fit_constant(single).constant, 2.0);
  const std::vector<BoundCheck> vac{make_check("tv-bl", "", 0.0, 0.0, 0.0, 0.0, "a"),
                                    make_check("tv-bl", "", 1e-12, 0.0, 1e-11, 0.0, "b")};
  EXPECT_TRUE(vac[0].vacuous);
  EXPECT_THROW(fit_constant(vac), std::invalid_argument);
  EXPECT_THROW(fit_constant(std::vector<BoundCheck>{}), std::invalid_argument);
}

TEST(FitConstant, FittedConstantIsTight) {
  std::vector<BoundCheck> suite;
  for (const double x : {0.1, 0.5, 0.9}) suite.push_back(make_check("w1-bl", "", x * x + x, 0.0, x, 0.0, "x"));
  const auto fit = fit_constant(suite);
  EXPECT_NEAR(fit.constant, 1.9, 1e-15);
  EXPECT_EQ(fit.argmax, 2U);
  for (const auto& b : suite) EXPECT_TRUE(apply_constant(b, fit.constant).holds);
  EXPECT_FALSE(apply_constant(suite[fit.argmax], 0.99 * fit.constant).holds);
}

TEST(BoundCheckRecord, HoldsMatchesSlack) {
  const auto b = make_check("pinsker", "", 1.0, 0.01, 0.995, 0.0, "x");
  EXPECT_NEAR(b.slack, -0.005, 1e-15);
  EXPECT_TRUE(b.holds);
  const auto c = make_check("pinsker", "", 1.0, 0.001, 0.995, 0.0, "x");
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(make_check("wq-wp", "p=1,q=2", 1, 0, 1, 0, "").key(), "wq-wp[p=1,q=2]");
}

TEST(TvBl, IdenticalPairIsVacuous) {
  const auto g = make_standard_gaussian(1);
  const auto b = check_tv_bl(g, g, kOpt);
  EXPECT_TRUE(b.vacuous);
  EXPECT_TRUE(b.holds);
}

TEST(TvBl, GaussianUniformRatioFiniteAndHoldsWhenFitted) {
  const auto b = check_tv_bl(make_standard_gaussian(1), make_isotropic_uniform(1), kOpt);
  EXPECT_NEAR(b.lhs, kTvGaussUniform, 1e-9);
  EXPECT_TRUE(std::isfinite(b.ratio()));
  EXPECT_TRUE(apply_constant(b, b.ratio()).holds);
}

TEST(TvBl, InterpolationFamilyShrinks) {
  const auto g = make_standard_gaussian(1);
  std::vector<BoundCheck> suite;
  for (const double t : {0.8, 0.4, 0.2, 0.1}) {
    suite.push_back(check_tv_bl(convolve_interpolate(make_isotropic_uniform(1), t), g, kOpt));
  }
  for (std::size_t i = 1; i < suite.size(); ++i) EXPECT_LT(suite[i].lhs, suite[i - 1].lhs);
  const double c = fit_constant(suite).constant;
  EXPECT_TRUE(std::isfinite(c));
  for (const auto& b : suite) EXPECT_LE(b.ratio(), c);
}

TEST(TvBl, RejectsNonIsotropic) {
  Eigen::VectorXd m(1);
  m << 1.0;
  Eigen::MatrixXd c(1, 1);
  c << 2.0;
  EXPECT_THROW(check_tv_bl(make_gaussian(m, c), make_standard_gaussian(1), kOpt), std::invalid_argument);
}

TEST(Bhvv, Examples) {
  const auto same = check_bhvv(make_standard_gaussian(1), kOpt);
  EXPECT_TRUE(same.vacuous);
  const auto u = check_bhvv(make_isotropic_uniform(1), kOpt);
  EXPECT_GT(u.ratio(), 0.0);
  EXPECT_TRUE(std::isfinite(u.ratio()));
  std::vector<double> ratios;
  for (const double t : {0.8, 0.4, 0.2, 0.1}) {
    ratios.push_back(check_bhvv(convolve_interpolate(make_isotropic_laplace(1), t), kOpt).ratio());
  }
  for (const double r : ratios) EXPECT_LT(r, 10.0 * ratios.front());
  EXPECT_THROW(check_bhvv(make_standard_gaussian(2), kOpt), std::invalid_argument);
}

TEST(W1Bl, Examples) {
  const auto g = make_standard_gaussian(1);
  EXPECT_TRUE(check_w1_bl(g, g, kOpt).vacuous);
  const auto l = check_w1_bl(g, make_isotropic_laplace(1), kOpt);
  EXPECT_GT(l.lhs, 0.0);
  EXPECT_TRUE(apply_constant(l, l.ratio()).holds);
}

TEST(WqWp, ChainAndErrors) {
  const auto m = compute_pair_metrics(make_standard_gaussian(1), make_isotropic_uniform(1), kOpt);
  EXPECT_LE(m.w1.value, m.w2.value);
  EXPECT_LE(m.w2.value, m.w4.value);
  const auto b12 = check_wq_wp(m, 1, 2, 1.0);
  EXPECT_NEAR(b12.lhs, m.w2.value * m.w2.value, 1e-15);
  EXPECT_TRUE(std::isfinite(b12.ratio()));
  const auto b14 = check_wq_wp(m, 1, 4, 1.0);
  EXPECT_TRUE(std::isfinite(b14.ratio()));
  EXPECT_EQ(b14.variant, "p=1,q=4");
  EXPECT_THROW(check_wq_wp(m, 2, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(check_wq_wp(m, 4, 2, 1.0), std::invalid_argument);
  const auto g = make_standard_gaussian(1);
  EXPECT_TRUE(check_wq_wp(g, g, 1, 2, 1.0, kOpt).vacuous);
}

TEST(HTv, Examples) {
  EXPECT_TRUE(check_h_tv(make_standard_gaussian(3), kOpt).vacuous);
  const auto l = check_h_tv(make_isotropic_laplace(1), kOpt);
  EXPECT_NEAR(l.lhs, kKlLaplaceGauss, 1e-9);
  EXPECT_TRUE(apply_constant(l, l.ratio()).holds);
  std::vector<BoundCheck> fam;
  for (const double t : {0.8, 0.4, 0.2, 0.1}) {
    fam.push_back(check_h_tv(convolve_interpolate(make_isotropic_uniform(1), t), kOpt));
  }
  for (std::size_t i = 1; i < fam.size(); ++i) EXPECT_LT(fam[i].lhs, fam[i - 1].lhs);
}

TEST(HTv, BoundedLfVariantIsTighterForLargeN) {
  const auto m = compute_pair_metrics(make_isotropic_laplace(1), make_standard_gaussian(1), kOpt);
  const auto a = check_h_tv(m);
  const auto b = check_h_tv_bounded_lf(m);
  EXPECT_EQ(b.bound_id, "h-tv-bounded-Lf");
  EXPECT_GE(b.rhs_unit, a.rhs_unit - 1e-15);
}

TEST(Classical, NdSandwichChecksHold) {
  const auto m = compute_pair_metrics(make_standard_gaussian(2), make_isotropic_uniform(2), kOpt);
  EXPECT_FALSE(m.exact);
  EXPECT_TRUE(check_classical_bl_tv(m).holds);
  EXPECT_TRUE(check_classical_bl_w1(m).holds);
  for (const auto& b : check_wp_monotone(m)) EXPECT_TRUE(b.holds) << b.key();
  const auto p = check_pinsker(m);
  EXPECT_TRUE(p.holds);
  EXPECT_TRUE(std::isinf(p.rhs_unit));
  EXPECT_THROW(check_kolmogorov_tv(m), std::invalid_argument);
}

TEST(Classical, OneDimensionalChecksHold) {
  const auto m = compute_pair_metrics(make_isotropic_laplace(1), make_standard_gaussian(1), kOpt);
  EXPECT_TRUE(check_classical_bl_tv(m).holds);
  EXPECT_TRUE(check_classical_bl_w1(m).holds);
  EXPECT_TRUE(check_kolmogorov_tv(m).holds);
  EXPECT_TRUE(check_pinsker(m).holds);
  EXPECT_GT(check_pinsker(m).slack, 0.0);
}

TEST(Deconvolution, GaussianMatchesOracle) {
  const auto g = make_standard_gaussian(1);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(deconvolution_gap_1d(g, kTs[i]).value, kGapGauss[i], 1e-10) << kTs[i];
    // Closed form: the densities of N(0,1) and N(0,1+t^2) cross at +-x*.
    const double s = std::sqrt(1.0 + kTs[i] * kTs[i]);
    const double x = std::sqrt(s * s * std::log(s * s) / (kTs[i] * kTs[i]));
    EXPECT_NEAR(kGapGauss[i], 4.0 * (numerics::normal_cdf(x) - numerics::normal_cdf(x / s)), 1e-14);
  }
}

TEST(Deconvolution, UniformOracleAndMonotone) {
  const auto u = make_isotropic_uniform(1);
  EXPECT_NEAR(deconvolution_gap_1d(u, 0.2).value, kGapUniform02, 1e-9);
  for (const auto& f : {make_standard_gaussian(1), u, make_isotropic_laplace(1)}) {
    double prev = INFINITY;
    for (const double t : kTs) {
      const double gap = deconvolution_gap_1d(f, t).value;
      EXPECT_LT(gap, prev) << f.label() << " t=" << t;
      prev = gap;
    }
  }
  EXPECT_THROW(deconvolution_gap_1d(u, 0.0), std::invalid_argument);
  EXPECT_THROW(deconvolution_gap_1d(make_standard_gaussian(2), 0.1), std::invalid_argument);
}

TEST(Deconvolution, SmoothedGridIsADensity) {
  const auto grid = smooth_density_1d(make_isotropic_uniform(1), 0.3);
  EXPECT_NEAR(grid.trapezoid_integral(), 1.0, 1e-6);
  EXPECT_THROW(smooth_density_1d(make_isotropic_uniform(1), -1.0), std::invalid_argument);
}

TEST(Paouris, GaussianSecondMomentIsRootN) {
  const auto m = paouris_moment(make_standard_gaussian(4), 2.0, 200000, 3);
  EXPECT_NEAR(m.value, 2.0, 1.5 * m.abs_error);
  EXPECT_THROW(paouris_moment(make_standard_gaussian(4), 12.0, 100, 3), std::invalid_argument);
  EXPECT_THROW(paouris_moment(make_standard_gaussian(4), 0.5, 100, 3), std::invalid_argument);
}

TEST(Paouris, GaussianTailMatchesChiTail) {
  EXPECT_NEAR(gaussian_norm_tail(4, 6.0), kChi4Tail6, 1e-20);
  const auto g2 = make_standard_gaussian(2);
  const double exact = gaussian_norm_tail(2, 3.0);
  EXPECT_NEAR(exact, std::exp(-4.5), 1e-16);
  const auto t = paouris_tail(g2, 3.0, 400000, 5);
  EXPECT_NEAR(t.probability, exact, 1.5 * t.band);
  EXPECT_GE(t.upper, t.probability);
}

TEST(Paouris, UniformTailBeyondSupportIsExactlyZero) {
  const auto t = paouris_tail(make_isotropic_uniform(4), 6.0, 1000, 1);
  EXPECT_TRUE(t.exact);
  EXPECT_EQ(t.probability, 0.0);
  EXPECT_TRUE(check_paouris_tail(make_isotropic_uniform(4), 6.0, 1000, 1).vacuous);
}

TEST(Paouris, LaplaceMomentUnderFittedEnvelope) {
  const auto b = check_paouris_moment(make_isotropic_laplace(8), 4.0, 200000, 9);
  EXPECT_DOUBLE_EQ(b.rhs_unit, 4.0);
  EXPECT_TRUE(apply_constant(b, b.ratio()).holds);
  EXPECT_LT(b.ratio(), 2.0);
}

TEST(Paouris, TailCheckUsesRecastForm) {
  const auto b = check_paouris_tail(make_standard_gaussian(4), 6.0, 1000, 1);
  EXPECT_DOUBLE_EQ(b.lhs, 6.0);
  EXPECT_NEAR(b.rhs_unit, -std::log(kChi4Tail6), 1e-12);
}

TEST(BobkovMadiman, ClosedForms) {
  for (const std::size_t n : {1U, 4U}) {
    const auto g = bobkov_madiman_variance(make_standard_gaussian(n), 200000, 2);
    EXPECT_NEAR(g.value, 0.5 * static_cast<double>(n), 1.5 * g.abs_error) << n;
  }
  EXPECT_EQ(bobkov_madiman_variance(make_isotropic_uniform(3), 10000, 2).value, 0.0);
  const auto l = bobkov_madiman_variance(make_isotropic_laplace(1), 200000, 2);
  EXPECT_NEAR(l.value, 1.0, 1.5 * l.abs_error);
}

TEST(IsotropicConstant, Examples) {
  EXPECT_NEAR(isotropic_constant(make_standard_gaussian(1)), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(isotropic_constant(make_isotropic_uniform(1)), 1.0 / (2.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(isotropic_constant(make_isotropic_laplace(4)), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_TRUE(check_isotropic_constant(make_isotropic_laplace(16)).holds);
}

TEST(MaxEntropy, CatalogBelowGaussian) {
  for (const auto& d : {make_standard_gaussian(2), make_isotropic_uniform(2), make_isotropic_laplace(2),
                        convolve_interpolate(make_isotropic_laplace(2), 0.5)}) {
    const auto b = check_max_entropy(d);
    EXPECT_GE(b.slack, -1e-7) << d.label();
    EXPECT_TRUE(b.holds);
  }
}
