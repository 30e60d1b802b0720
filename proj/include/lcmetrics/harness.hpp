#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lcmetrics/bounds.hpp"
#include "lcmetrics/distributions.hpp"
#include "lcmetrics/metrics.hpp"

namespace lcm {

// Malformed configs and distribution specs; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- distribution specs -------------------------------------------------------

/// A catalog member by name. Without parameters the family is its isotropic
/// version; with parameters it is the raw law, whitened when `whiten` is set.
/// When t is present the result is convolve_interpolate(member, t).
///
/// Families and their parameters (one value shared by every coordinate):
///   gaussian: mean, sd     uniform: center, half_width     laplace: center, rate
struct DistributionSpec {
  std::string family;
  std::size_t n = 1;
  std::map<std::string, double> params;
  bool whiten = false;
  std::optional<double> t;
};

// Compact text form, e.g. "laplace", "uniform:n=2,t=0.4", "gaussian:mean=3,sd=2,whiten".
DistributionSpec parse_distribution_spec(std::string_view text);
std::string to_string(const DistributionSpec& spec);
LogConcaveDensity build_distribution(const DistributionSpec& spec);

// ---- configs ------------------------------------------------------------------

// Metric ids, in CSV column order.
inline const std::vector<std::string> kMetricIds = {"bl", "entropy", "h", "kolmogorov", "tv",
                                                    "w1", "w1_dual", "w2", "w4"};
// Bound ids a sweep can evaluate. min-lemma takes no distribution and is left to verify.
inline const std::vector<std::string> kSweepBoundIds = {
    "bhvv",          "bobkov-madiman", "classical-bl-tv", "classical-bl-w1", "eldan-klartag", "h-tv",
    "h-tv-bounded-Lf", "isotropic-constant", "kolmogorov-tv", "max-entropy", "paouris-moment", "paouris-tail",
    "pinsker",       "tv-bl",          "w1-bl",           "wp-monotone",     "wq-wp"};

/// One pair family of a sweep: mu = base interpolated at each t (the base
/// itself when t is empty) against the reference.
struct SuiteEntry {
  std::string id;
  DistributionSpec base;
  DistributionSpec reference;
  std::vector<double> t;
};

struct ExperimentConfig {
  std::vector<SuiteEntry> suite;
  std::vector<std::string> metrics = kMetricIds;
  std::vector<std::string> bounds = kSweepBoundIds;
  std::size_t grid_size = 4096;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  // Added to every check's numerical tolerance before pass/fail.
  double tolerance = 1e-6;
  std::vector<double> lemma_t = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> paouris_r = {3.0, 4.0, 5.0};  // multiples of sqrt(n)
  std::vector<double> paouris_p = {1.0, 2.0, 4.0, 8.0};
  std::filesystem::path out_dir = "lcm-out";
};

// Throws ConfigError on any schema violation, a missing seed or an empty suite.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// ---- sweeps -------------------------------------------------------------------

struct ExperimentRecord {
  std::string pair_id;
  std::size_t n = 1;
  std::optional<double> t;  // empty when the base is used as is
  std::uint64_t seed = 0;
  std::map<std::string, MetricResult> metrics;
  std::vector<BoundCheck> checks;  // evaluated at the fitted constants
  double wall_seconds = 0.0;
};

struct FitRow {
  std::string key;
  bool has_constant = false;  // false for classical bounds
  bool vacuous = false;       // every instance vacuous
  double constant = 0.0;
  std::string argmax;  // "pair_id@t inputs" of the instance attaining the constant
  std::size_t instances = 0;
  std::size_t used = 0;
  std::size_t failures = 0;
  // min, 25%, 50%, 75%, max of the slack over all instances.
  std::vector<double> slack_quantiles;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;  // sorted by (pair_id, t)
  std::vector<FitRow> fits;               // sorted by key
  double inner_constant = 1.0;            // c inside the wq-wp logarithm
};

SweepResult run_sweep(const ExperimentConfig& config);

// Bounds with a free constant; the rest are checked at C = 1.
bool has_free_constant(std::string_view bound_id);
// Checks in one group share a fitted constant: each wq-wp (p, q) pair is its
// own group, every other bound pools its variants (t, R or p values).
std::string fit_group(const BoundCheck& check);

// Fits every free constant over the records, re-evaluates each check at its
// constant with `tolerance` added, and returns the fit rows sorted by key.
// Checks read back by read_checks_csv can be refit the same way.
std::vector<FitRow> refit(std::vector<ExperimentRecord>& records, double tolerance);

// ---- reports ------------------------------------------------------------------

// records.csv: pair_id, n, t, metrics alphabetically, slack_<key> alphabetically.
void write_records_csv(const SweepResult& result, const ExperimentConfig& config, std::ostream& out);
// checks.csv: one row per check with both sides, errors and the fitted constant.
void write_checks_csv(const SweepResult& result, std::ostream& out);
void write_fit_csv(const std::vector<FitRow>& fits, std::ostream& out);
void write_summary(const SweepResult& result, std::ostream& out);
std::vector<ExperimentRecord> read_checks_csv(std::istream& in);

// Writes records.csv, checks.csv, fit.csv, summary.txt and envelope.svg into out_dir.
void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& config);

// Number of checks failing beyond tolerance.
std::size_t count_failures(const SweepResult& result);

// ---- plots --------------------------------------------------------------------

// max{1, log(1/x)} x.
double envelope(double x);

struct ScatterPoint {
  double bl = 0.0;
  double w1 = 0.0;
  std::size_t n = 1;
  std::string label;
};

/// SVG of the envelope on (0, 1.5]. A <metadata> block lists the sampled
/// values, including x = 1, e^-1 and e^-2. When points are given they are
/// drawn over C sqrt(n) envelope(d_BL / sqrt(n)).
std::string envelope_svg(const std::vector<ScatterPoint>& points = {}, double constant = 1.0);
void plot_envelope(const std::filesystem::path& path, const std::vector<ScatterPoint>& points = {},
                   double constant = 1.0);
std::vector<ScatterPoint> scatter_from(const SweepResult& result);

// ---- acceptance ---------------------------------------------------------------

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  std::size_t mc_samples = 200000;
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path() / "lcmetrics-verify";
};

// Runs every criterion, printing "PASS|FAIL <id> <name>: <detail>" lines as they finish.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

}  // namespace lcm
