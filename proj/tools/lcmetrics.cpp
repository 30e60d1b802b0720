#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lcmetrics/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBoundFailure = 1;
constexpr int kConfigError = 2;

struct Flags {
  std::uint64_t seed = 0;
  std::size_t mc_samples = 200000;
  std::size_t grid_size = 4096;
  double tolerance = 1e-6;
  std::string out;
};

int compute(const std::string& metric, const std::string& mu_text, const std::string& nu_text, const Flags& f) {
  const lcm::LogConcaveDensity mu = lcm::build_distribution(lcm::parse_distribution_spec(mu_text));
  const lcm::LogConcaveDensity nu = lcm::build_distribution(lcm::parse_distribution_spec(nu_text));
  if (mu.dimension() != nu.dimension()) throw lcm::ConfigError("mu and nu have different dimensions");
  const bool one_d = mu.dimension() == 1;
  lcm::MetricResult r;
  if (metric == "tv") {
    r = one_d ? lcm::tv_distance_1d(mu, nu) : lcm::tv_distance_nd(mu, nu, f.mc_samples, f.seed);
  } else if (metric == "kolmogorov") {
    if (!one_d) throw lcm::ConfigError("kolmogorov is one-dimensional");
    r = lcm::kolmogorov_distance_1d(mu, nu);
  } else if (metric == "bl") {
    if (!one_d) {
      const lcm::BlSandwich s = lcm::bl_sandwich_nd(mu, nu, f.grid_size, f.mc_samples, f.seed);
      for (const auto& [name, end] : {std::pair{"bl_lower", &s.lower}, std::pair{"bl_upper", &s.upper}}) {
        std::cout << fmt::format("{} {:.17g} {:.3g} {} {}\n", name, end->value, end->abs_error,
                                 lcm::to_string(end->method), end->detail);
      }
      return kOk;
    }
    r = lcm::bl_distance_1d(mu, nu, f.grid_size);
  } else if (metric == "w1" || metric == "w2" || metric == "w4") {
    const double p = metric[1] - '0';
    r = one_d ? lcm::wasserstein_p_1d(mu, nu, p) : lcm::wasserstein_p_nd_upper(mu, nu, p, f.mc_samples, f.seed);
  } else if (metric == "w1_dual") {
    if (!one_d) throw lcm::ConfigError("w1_dual is one-dimensional");
    r = lcm::w1_dual_1d(mu, nu);
  } else if (metric == "h") {
    r = lcm::relative_entropy(mu, nu, {f.mc_samples, f.seed});
  } else if (metric == "entropy") {
    r = lcm::differential_entropy(mu);
  } else {
    throw lcm::ConfigError(fmt::format("unknown metric '{}'", metric));
  }
  std::cout << fmt::format("{} {:.17g} {:.3g} {} {}\n", metric, r.value, r.abs_error, lcm::to_string(r.method),
                           r.detail);
  return kOk;
}

int sweep(const std::string& config_path, const Flags& f, const CLI::App& cmd) {
  lcm::ExperimentConfig cfg = lcm::load_config(config_path);
  if (cmd.count("--seed") > 0) cfg.seed = f.seed;
  if (cmd.count("--mc-samples") > 0) cfg.mc_samples = f.mc_samples;
  if (cmd.count("--grid-size") > 0) cfg.grid_size = f.grid_size;
  if (cmd.count("--tolerance") > 0) cfg.tolerance = f.tolerance;
  if (!f.out.empty()) cfg.out_dir = f.out;
  const lcm::SweepResult result = lcm::run_sweep(cfg);
  lcm::write_sweep_outputs(result, cfg);
  lcm::write_summary(result, std::cout);
  std::cout << fmt::format("outputs in {}\n", cfg.out_dir.string());
  return lcm::count_failures(result) == 0 ? kOk : kBoundFailure;
}

int fit(const std::string& checks_path, const Flags& f) {
  std::ifstream in(checks_path);
  if (!in) throw lcm::ConfigError(fmt::format("cannot read {}", checks_path));
  lcm::SweepResult result;
  result.records = lcm::read_checks_csv(in);
  result.fits = lcm::refit(result.records, f.tolerance);
  if (f.out.empty()) {
    lcm::write_fit_csv(result.fits, std::cout);
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw lcm::ConfigError(fmt::format("cannot write {}", f.out));
    lcm::write_fit_csv(result.fits, out);
  }
  std::size_t failures = 0;
  for (const auto& row : result.fits) failures += row.failures;
  if (failures > 0) std::cerr << fmt::format("{} checks fail beyond tolerance\n", failures);
  return failures == 0 ? kOk : kBoundFailure;
}

// (d_BL, W_1) points from a records.csv written by sweep.
std::vector<lcm::ScatterPoint> read_scatter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lcm::ConfigError(fmt::format("cannot read {}", path));
  const auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
  };
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  const auto col = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw lcm::ConfigError(fmt::format("{} has no {} column", path, name));
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id = col("pair_id"), n = col("n"), t = col("t"), bl = col("bl"), w1 = col("w1");
  std::vector<lcm::ScatterPoint> points;
  while (std::getline(in, line)) {
    const auto f = split(line);
    if (f.size() != header.size() || f[bl] == "NA" || f[w1] == "NA") continue;
    points.push_back({std::stod(f[bl]), std::stod(f[w1]), std::stoul(f[n]), f[id] + "@" + f[t]});
  }
  return points;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probability metrics and comparison inequalities for isotropic log-concave measures"};
  app.require_subcommand(1);
  Flags flags;
  const auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--seed", flags.seed, "Random seed");
    sub->add_option("--mc-samples", flags.mc_samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    sub->add_option("--grid-size", flags.grid_size, "Cells of the d_BL grid")->check(CLI::Range(16, 1 << 24));
    sub->add_option("--tolerance", flags.tolerance, "Absolute slack allowed on top of numerical error")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", flags.out, "Output file or directory");
  };

  std::string metric, mu, nu, path, data;
  double constant = 1.0;

  auto* c_compute = app.add_subcommand("compute", "One metric for one pair, e.g. compute tv laplace gaussian");
  c_compute->add_option("metric", metric, "tv, kolmogorov, bl, w1, w2, w4, w1_dual, h, entropy")->required();
  c_compute->add_option("mu", mu, "Distribution spec such as uniform:n=2,t=0.4")->required();
  c_compute->add_option("nu", nu, "Distribution spec")->required();
  add_common(c_compute);

  auto* c_sweep = app.add_subcommand("sweep", "Run a sweep config and write CSV, SVG and summary outputs");
  c_sweep->add_option("config", path, "JSON config")->required();
  add_common(c_sweep);

  auto* c_fit = app.add_subcommand("fit", "Refit constants from a checks.csv");
  c_fit->add_option("checks", path, "checks.csv written by sweep")->required();
  add_common(c_fit);

  auto* c_plot = app.add_subcommand("plot-envelope", "Write the max{1, log(1/x)} x envelope as SVG");
  c_plot->add_option("output", path, "SVG path")->required();
  c_plot->add_option("--data", data, "records.csv whose (bl, w1) columns are overlaid");
  c_plot->add_option("--constant", constant, "Envelope scale for the overlay")->check(CLI::PositiveNumber);

  auto* c_verify = app.add_subcommand("verify", "Run the acceptance suite");
  add_common(c_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*c_compute) return compute(metric, mu, nu, flags);
    if (*c_sweep) return sweep(path, flags, *c_sweep);
    if (*c_fit) return fit(path, flags);
    if (*c_plot) {
      lcm::plot_envelope(path, data.empty() ? std::vector<lcm::ScatterPoint>{} : read_scatter(data), constant);
      std::cout << fmt::format("wrote {}\n", path);
      return kOk;
    }
    if (*c_verify) {
      lcm::AcceptanceOptions opt;
      if (c_verify->count("--seed") > 0) opt.seed = flags.seed;
      if (c_verify->count("--mc-samples") > 0) opt.mc_samples = flags.mc_samples;
      if (!flags.out.empty()) opt.scratch_dir = flags.out;
      const auto results = lcm::run_acceptance(opt, std::cout);
      const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
      return all ? kOk : kBoundFailure;
    }
  } catch (const lcm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
