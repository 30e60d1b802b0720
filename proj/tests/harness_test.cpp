#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lcmetrics/harness.hpp"

using namespace lcm;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  return parse_config(R"({
    "seed": 7,
    "mc_samples": 4000,
    "grid_size": 512,
    "metrics": ["tv", "bl", "w1", "h"],
    "suite": [{"id": "u", "base": "uniform", "t": [0.8, 0.4, 0.2, 0.1]}]
  })");
}

const FitRow* find_fit(const SweepResult& r, const std::string& key) {
  for (const auto& f : r.fits) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace

TEST(SpecParse, FamiliesAndParams) {
  const auto a = parse_distribution_spec("uniform:n=2,t=0.4");
  EXPECT_EQ(a.family, "uniform");
  EXPECT_EQ(a.n, 2u);
  ASSERT_TRUE(a.t);
  EXPECT_DOUBLE_EQ(*a.t, 0.4);
  const LogConcaveDensity d = build_distribution(a);
  EXPECT_EQ(d.dimension(), 2u);
  EXPECT_TRUE(d.is_isotropic());

  const auto b = parse_distribution_spec("gaussian:mean=3,sd=2,whiten");
  EXPECT_TRUE(b.whiten);
  EXPECT_TRUE(build_distribution(b).is_isotropic());
  EXPECT_FALSE(build_distribution(parse_distribution_spec("gaussian:mean=3,sd=2")).is_isotropic());

  EXPECT_EQ(parse_distribution_spec(to_string(a)).n, a.n);
}

TEST(SpecParse, RejectsBadInput) {
  for (const char* bad : {"cauchy", "uniform:n=0", "gaussian:rate=2", "laplace:t=1.5", "uniform:n=two", ""}) {
    EXPECT_THROW(build_distribution(parse_distribution_spec(bad)), ConfigError) << bad;
  }
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config(R"({"seed": 1, "suite": []})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"suite": [{"id": "a", "base": "uniform"}]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": 1, "suite": [{"id": "a", "base": "nope"}]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": 1, "suite": [{"id": "a", "base": "uniform"}], "metrics": ["xx"]})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": 1, "suite": [{"id": "a", "base": "uniform"}, {"id": "a", "base": "laplace"}]})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"seed": 1, "suite": [{"id": "a", "base": "uniform"}], "colour": 1})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);

  ExperimentConfig empty;
  EXPECT_THROW(run_sweep(empty), ConfigError);
}

TEST(Config, DefaultsRequestEveryId) {
  const auto cfg = parse_config(R"({"seed": 3, "suite": [{"id": "a", "base": {"family": "laplace", "n": 2}}]})");
  EXPECT_EQ(cfg.metrics, kMetricIds);
  EXPECT_EQ(cfg.bounds, kSweepBoundIds);
  EXPECT_EQ(cfg.suite.at(0).base.n, 2u);
  EXPECT_EQ(cfg.suite.at(0).reference.family, "gaussian");
  EXPECT_EQ(cfg.suite.at(0).reference.n, 2u);
}

TEST(Sweep, IdenticalPairIsVacuous) {
  auto cfg = parse_config(R"({"seed": 1, "mc_samples": 2000, "grid_size": 256,
                              "suite": [{"id": "g", "base": "gaussian", "reference": "gaussian"}]})");
  const SweepResult r = run_sweep(cfg);
  ASSERT_EQ(r.records.size(), 1u);
  const auto& rec = r.records[0];
  EXPECT_FALSE(rec.t);
  for (const char* m : {"tv", "bl", "w1", "w2", "w4", "h", "kolmogorov", "w1_dual"}) {
    EXPECT_NEAR(rec.metrics.at(m).value, 0.0, 1e-9) << m;
  }
  EXPECT_EQ(count_failures(r), 0u);
  for (const auto& key : {"tv-bl", "w1-bl", "bhvv", "h-tv"}) {
    const FitRow* f = find_fit(r, key);
    ASSERT_NE(f, nullptr) << key;
    EXPECT_TRUE(f->vacuous) << key;
  }
  std::ostringstream fit;
  write_fit_csv(r.fits, fit);
  EXPECT_NE(fit.str().find("tv-bl,vacuous,"), std::string::npos);
}

TEST(Sweep, InterpolationSeriesDecreases) {
  const SweepResult r = run_sweep(small_config());
  ASSERT_EQ(r.records.size(), 4u);
  // Records sort ascending in t, so each metric should increase along the list.
  for (const char* m : {"tv", "bl", "w1", "h"}) {
    for (std::size_t i = 1; i < r.records.size(); ++i) {
      const auto& lo = r.records[i - 1].metrics.at(m);
      const auto& hi = r.records[i].metrics.at(m);
      EXPECT_LT(lo.value, hi.value + lo.abs_error + hi.abs_error) << m << " at " << *r.records[i].t;
    }
  }
  EXPECT_DOUBLE_EQ(*r.records.front().t, 0.1);
  for (const auto& f : r.fits) {
    if (f.has_constant && !f.vacuous) EXPECT_TRUE(std::isfinite(f.constant)) << f.key;
  }
  EXPECT_EQ(count_failures(r), 0u);
}

TEST(Sweep, RerunIsByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path() / "lcmetrics-harness-test";
  std::filesystem::remove_all(dir);
  auto cfg = small_config();
  cfg.out_dir = dir / "a";
  write_sweep_outputs(run_sweep(cfg), cfg);
  cfg.out_dir = dir / "b";
  write_sweep_outputs(run_sweep(cfg), cfg);
  for (const char* f : {"records.csv", "checks.csv", "fit.csv", "summary.txt", "envelope.svg"}) {
    const std::string a = slurp(dir / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
  }
  std::filesystem::remove_all(dir);
}

TEST(Sweep, ChecksCsvRoundTrip) {
  const auto cfg = small_config();
  const SweepResult r = run_sweep(cfg);
  std::stringstream csv;
  write_checks_csv(r, csv);
  auto records = read_checks_csv(csv);
  ASSERT_EQ(records.size(), r.records.size());
  const auto fits = refit(records, cfg.tolerance);
  ASSERT_EQ(fits.size(), r.fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    EXPECT_EQ(fits[i].key, r.fits[i].key);
    EXPECT_EQ(fits[i].vacuous, r.fits[i].vacuous);
    EXPECT_EQ(fits[i].failures, r.fits[i].failures);
    if (fits[i].has_constant && !fits[i].vacuous) EXPECT_DOUBLE_EQ(fits[i].constant, r.fits[i].constant) << fits[i].key;
  }

  std::stringstream bad("pair_id,n\n");
  EXPECT_THROW(read_checks_csv(bad), ConfigError);
}

// The constant fitted on a subset never exceeds the one fitted on the whole sweep.
TEST(Sweep, SubsetFitIsNoLarger) {
  const SweepResult r = run_sweep(small_config());
  std::vector<ExperimentRecord> subset(r.records.begin(), r.records.begin() + 2);
  const auto part = refit(subset, 0.0);
  for (const auto& f : part) {
    const FitRow* whole = find_fit(r, f.key);
    ASSERT_NE(whole, nullptr);
    if (f.has_constant && !f.vacuous) EXPECT_LE(f.constant, whole->constant) << f.key;
  }
}

TEST(Sweep, FitGroups) {
  const BoundCheck a = make_check("wq-wp", "p=1,q=2", 0.1, 0.0, 1.0, 0.0, "");
  const BoundCheck b = make_check("paouris-tail", "R=3sqrt(n)", 0.1, 0.0, 1.0, 0.0, "");
  EXPECT_EQ(fit_group(a), a.key());
  EXPECT_EQ(fit_group(b), "paouris-tail");
  EXPECT_TRUE(has_free_constant("w1-bl"));
  EXPECT_FALSE(has_free_constant("pinsker"));
}

TEST(Envelope, Values) {
  EXPECT_NEAR(envelope(1.0), 1.0, 1e-15);
  EXPECT_NEAR(envelope(std::exp(-1.0)), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(envelope(std::exp(-2.0)), 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_DOUBLE_EQ(envelope(0.5), 0.5);
  // Continuous across the branch point at 1/e.
  const double e1 = std::exp(-1.0);
  EXPECT_NEAR(envelope(e1 * (1 - 1e-9)), envelope(e1), 1e-9);
  EXPECT_LT(envelope(1e-6), 1.4e-5);
}

TEST(Envelope, SvgCarriesSamplesAndScatter) {
  const std::string plain = envelope_svg();
  EXPECT_NE(plain.find("<metadata id=\"envelope-samples\">"), std::string::npos);
  EXPECT_EQ(plain.find("<metadata id=\"scatter\">"), std::string::npos);
  EXPECT_NE(plain.find("\n1 1\n"), std::string::npos);

  const std::string with = envelope_svg({{0.1, 0.2, 1, "a<b"}}, 2.0);
  EXPECT_NE(with.find("<metadata id=\"scatter\">"), std::string::npos);
  EXPECT_NE(with.find("a&lt;b"), std::string::npos);
  EXPECT_EQ(with.find("a<b"), std::string::npos);
}

TEST(Sweep, InfiniteEntropyKeepsFiniteQuantiles) {
  auto cfg = parse_config(R"({"seed": 2, "mc_samples": 2000, "grid_size": 256, "bounds": ["pinsker"],
                              "suite": [{"id": "lu", "base": "laplace", "reference": "uniform"},
                                        {"id": "ug", "base": "uniform"}]})");
  const SweepResult r = run_sweep(cfg);
  const FitRow* f = find_fit(r, "pinsker");
  ASSERT_NE(f, nullptr);
  for (const double q : f->slack_quantiles) EXPECT_FALSE(std::isnan(q));
  EXPECT_TRUE(std::isinf(f->slack_quantiles.back()));
  EXPECT_EQ(f->failures, 0u);
}
