#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "lcmetrics/harness.hpp"
#include "lcmetrics/numerics.hpp"

namespace lcm {
namespace {

// Monte Carlo comparisons use 4 sigma; MetricResult bands are 1.96 sigma.
constexpr double kSigmas = 4.0;
double four_sigma(const MetricResult& r) { return kSigmas * r.abs_error / 1.96; }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  void require(bool ok, std::string what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 4) failures.push_back(std::move(what));
    }
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
  [[nodiscard]] std::string detail() const {
    std::string out = fmt::format("{}", fmt::join(notes, "; "));
    if (!failures.empty()) out += fmt::format(" | failed: {}", fmt::join(failures, "; "));
    return out;
  }
};

LogConcaveDensity interp(const LogConcaveDensity& base, double t) { return convolve_interpolate(base, t); }

LogConcaveDensity whitened_laplace_1d() {
  const LogConcaveDensity raw = make_laplace_product({Laplace1D{2.0, 0.5}});
  return whiten(raw, raw.mean(), raw.covariance());
}

// Isotropic 1-D catalog.
std::vector<LogConcaveDensity> catalog_1d() {
  return {make_standard_gaussian(1),
          make_isotropic_uniform(1),
          make_isotropic_laplace(1),
          interp(make_isotropic_uniform(1), 0.5),
          interp(make_isotropic_laplace(1), 0.5),
          whitened_laplace_1d()};
}

// Isotropic product catalog in dimension n.
std::vector<LogConcaveDensity> catalog_nd(std::size_t n) {
  return {make_standard_gaussian(n), make_isotropic_uniform(n), make_isotropic_laplace(n),
          interp(make_isotropic_uniform(n), 0.5), interp(make_isotropic_laplace(n), 0.5)};
}

struct Pair {
  LogConcaveDensity mu;
  LogConcaveDensity nu;
};

std::vector<Pair> pairs_1d() {
  const auto cat = catalog_1d();
  std::vector<Pair> out;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i + 1; j < cat.size(); ++j) out.push_back({cat[i], cat[j]});
  }
  return out;
}

std::vector<Pair> pairs_nd(std::size_t n) {
  const auto cat = catalog_nd(n);
  return {{cat[0], cat[1]}, {cat[0], cat[2]}, {cat[1], cat[2]}, {cat[3], cat[0]}, {cat[4], cat[0]}};
}

// The interpolation family against gamma_1 plus every 1-D catalog member against gamma_1.
std::vector<LogConcaveDensity> against_gaussian_1d() {
  std::vector<LogConcaveDensity> out;
  for (const auto& d : catalog_1d()) {
    if (d.label() != "gaussian1") out.push_back(d);
  }
  for (const double t : {0.8, 0.4, 0.2, 0.1}) {
    out.push_back(interp(make_isotropic_uniform(1), t));
    out.push_back(interp(make_isotropic_laplace(1), t));
  }
  return out;
}

struct GroupFit {
  double constant = 0.0;
  std::string argmax;
  std::vector<BoundCheck> checks;
};

std::map<std::string, GroupFit> fit_groups(const std::vector<BoundCheck>& checks) {
  std::map<std::string, GroupFit> groups;
  for (const auto& c : checks) groups[fit_group(c)].checks.push_back(c);
  for (auto& [_, g] : groups) {
    const ConstantFit fit = fit_constant(g.checks);
    g.constant = fit.constant;
    g.argmax = g.checks[fit.argmax].inputs;
  }
  return groups;
}

// ---- criteria --------------------------------------------------------------------

Verdict closed_forms(const AcceptanceOptions&) {
  Verdict v;
  const auto g0 = make_standard_gaussian(1);
  const auto g1 = make_gaussian(Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Identity(1, 1));
  const auto g4 = make_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 4.0));
  const double phi_half = numerics::normal_cdf(0.5);
  const auto near = [&v](const char* what, double got, double want, double tol) {
    v.note(fmt::format("{} err {:.1e}", what, std::abs(got - want)));
    v.require(std::abs(got - want) <= tol, fmt::format("{} = {:.12g}, want {:.12g}", what, got, want));
  };
  near("tv", tv_distance_1d(g0, g1).value, 4.0 * phi_half - 2.0, 1e-6);
  near("ks", kolmogorov_distance_1d(g0, g1).value, 2.0 * phi_half - 1.0, 1e-6);
  near("w1", wasserstein_p_1d(g0, g1, 1.0).value, 1.0, 1e-6);
  near("w2", wasserstein_p_1d(g0, g1, 2.0).value, 1.0, 1e-6);
  near("kl", relative_entropy(g4, g0).value, 1.5 - std::log(2.0), 1e-6);
  near("entropy", differential_entropy(g0).value, 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e), 1e-7);
  return v;
}

Verdict classical_suite(const AcceptanceOptions& opt) {
  Verdict v;
  std::vector<Pair> pairs = pairs_1d();
  for (const std::size_t n : {2u, 4u, 8u}) {
    for (auto& p : pairs_nd(n)) pairs.push_back(std::move(p));
  }
  std::size_t checks = 0;
  double worst = INFINITY;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairMetrics m = compute_pair_metrics(pairs[i].mu, pairs[i].nu, {4096, opt.mc_samples, opt.seed + i});
    std::vector<BoundCheck> cs = {check_classical_bl_tv(m), check_classical_bl_w1(m), check_pinsker(m)};
    for (auto& c : check_wp_monotone(m)) cs.push_back(std::move(c));
    if (m.ks) cs.push_back(check_kolmogorov_tv(m));
    for (const auto& c : cs) {
      ++checks;
      // Allowed deficit: 1e-6 plus the combined numerical or Monte Carlo bands.
      const double margin = c.slack + c.tolerance + 1e-6;
      worst = std::min(worst, margin);
      v.require(margin >= 0.0, fmt::format("{} on {}: slack {:.3g}", c.key(), c.inputs, c.slack));
    }
  }
  v.note(fmt::format("{} pairs, {} checks, smallest margin {:.3g}", pairs.size(), checks, worst));
  return v;
}

double wq_inner_constant(const AcceptanceOptions& opt) {
  std::vector<BoundCheck> moments;
  for (const auto& d : catalog_1d()) {
    for (const double p : {1.0, 2.0, 4.0, 8.0}) moments.push_back(check_paouris_moment(d, p, opt.mc_samples, opt.seed));
  }
  return fit_constant(moments).constant;
}

std::vector<BoundCheck> reversed_checks(std::size_t grid, double c_in, const AcceptanceOptions& opt) {
  std::vector<BoundCheck> out;
  const MetricOptions mo{grid, opt.mc_samples, opt.seed};
  std::vector<Pair> pairs = pairs_1d();
  for (const auto& mu : against_gaussian_1d()) {
    if (mu.label().rfind("interp", 0) == 0) pairs.push_back({mu, make_standard_gaussian(1)});
  }
  for (const auto& p : pairs) {
    const PairMetrics m = compute_pair_metrics(p.mu, p.nu, mo);
    out.push_back(check_tv_bl(m));
    out.push_back(check_w1_bl(m));
    for (const auto& [lo, hi] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{2, 4}}) {
      out.push_back(check_wq_wp(m, lo, hi, c_in));
    }
  }
  for (const auto& mu : against_gaussian_1d()) {
    const PairMetrics m = compute_pair_metrics(mu, make_standard_gaussian(1), mo);
    out.push_back(check_bhvv(m));
    out.push_back(check_h_tv(m));
    out.push_back(check_h_tv_bounded_lf(m));
  }
  return out;
}

Verdict reversed_suite(const AcceptanceOptions& opt) {
  Verdict v;
  const double c_in = wq_inner_constant(opt);
  v.note(fmt::format("inner c = {:.4g}", c_in));
  const auto coarse = fit_groups(reversed_checks(4096, c_in, opt));
  const auto fine = fit_groups(reversed_checks(8192, c_in, opt));
  for (const auto& [key, g] : coarse) {
    const double c = g.constant;
    const double c2 = fine.at(key).constant;
    const double change = std::abs(c2 - c) / c;
    v.require(std::isfinite(c) && c > 0.0, fmt::format("{}: C = {}", key, c));
    v.require(change < 0.10, fmt::format("{}: C moved {:.2f}% under grid doubling", key, 100.0 * change));
    bool all_hold = true;
    bool some_fail = false;
    for (const auto& check : g.checks) {
      all_hold = all_hold && apply_constant(check, c).holds;
      some_fail = some_fail || !apply_constant(check, 0.99 * c).holds;
    }
    v.require(all_hold, fmt::format("{}: an instance fails at the fitted C", key));
    v.require(some_fail, fmt::format("{}: 0.99 C still holds everywhere", key));
    v.note(fmt::format("{} C={:.4g} (x2 grid {:+.1e})", key, c, change));
  }
  return v;
}

Verdict duality(const AcceptanceOptions&) {
  Verdict v;
  double worst_w1 = 0.0;
  double worst_bl = -INFINITY;
  for (const auto& p : pairs_1d()) {
    const double q = wasserstein_p_1d(p.mu, p.nu, 1.0).value;
    const double d = w1_dual_1d(p.mu, p.nu).value;
    worst_w1 = std::max(worst_w1, std::abs(q - d));
    v.require(std::abs(q - d) <= 1e-6, fmt::format("W1 routes differ by {:.2e} on {} vs {}", std::abs(q - d),
                                                   p.mu.label(), p.nu.label()));
    const MetricResult b12 = bl_distance_1d(p.mu, p.nu, 4096);
    const MetricResult b13 = bl_distance_1d(p.mu, p.nu, 8192);
    const double change = std::abs(b13.value - b12.value);
    worst_bl = std::max(worst_bl, change - b12.abs_error);
    v.require(change <= b12.abs_error, fmt::format("d_BL moved {:.2e} > abs_error {:.2e} on {} vs {}", change,
                                                   b12.abs_error, p.mu.label(), p.nu.label()));
  }
  v.note(fmt::format("max |W1 quantile - W1 dual| {:.2e}; max (BL change - abs_error) {:.2e}", worst_w1, worst_bl));
  return v;
}

Verdict min_lemma(const AcceptanceOptions& opt) {
  Verdict v;
  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> logu(-4.0, 4.0);
  std::uniform_real_distribution<double> kk(0.2, 4.0);
  int interior = 0;
  double worst_excess = -INFINITY;
  double widest_gap = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::exp(logu(gen));
    const double b = std::exp(2.0 * logu(gen));
    const double m = std::exp(0.5 * logu(gen));
    const double k = kk(gen);
    const MinLemma r = min_lemma_bound(a, b, m, k);
    v.require(r.value <= r.bound, fmt::format("value > bound at A={} B={} M={} k={}", a, b, m, k));
    v.require(r.t_star >= m, "t_star < M");
    if (!(r.t_star > m)) continue;
    ++interior;
    // Dense grid on [M, T], where T is past every point below the value, then Brent.
    const auto f = [&](double t) { return a * std::pow(t, k) + b * std::exp(-t); };
    const double hi = std::max(r.t_star, std::pow(r.value / a, 1.0 / k));
    constexpr int kGrid = 4000;
    double best_t = m;
    double best = f(m);
    for (int j = 1; j <= kGrid; ++j) {
      const double t = m + (hi - m) * j / kGrid;
      if (f(t) < best) {
        best = f(t);
        best_t = t;
      }
    }
    const double step = (hi - m) / kGrid;
    const auto refined = boost::math::tools::brent_find_minima(f, std::max(m, best_t - step), best_t + step, 52);
    const double inf = std::min(best, refined.second);
    worst_excess = std::max(worst_excess, inf - r.value);
    widest_gap = std::max(widest_gap, (r.value - inf) / r.value);
    v.require(inf <= r.value + 1e-9, fmt::format("infimum {:.17g} above value {:.17g}", inf, r.value));
  }
  v.note(fmt::format("10^4 draws, {} with interior t_star; max (infimum - value) {:.2e}; largest relative gap "
                     "value over infimum {:.2f}",
                     interior, worst_excess, widest_gap));
  return v;
}

double gaussian_gap(double t) {
  // L1 distance between N(0,1) and N(0,s^2): the densities cross at +-x.
  const double s2 = 1.0 + t * t;
  const double x = std::sqrt(s2 * std::log(s2) / (s2 - 1.0));
  return 4.0 * (numerics::normal_cdf(x) - numerics::normal_cdf(x / std::sqrt(s2)));
}

Verdict eldan_klartag(const AcceptanceOptions&) {
  Verdict v;
  const std::vector<double> ts = {0.4, 0.2, 0.1, 0.05};
  std::vector<BoundCheck> checks;
  double gauss_err = 0.0;
  for (const auto& f : catalog_1d()) {
    double previous = INFINITY;
    for (const double t : ts) {
      checks.push_back(check_eldan_klartag(f, t));
      const double gap = checks.back().lhs;
      v.require(gap < previous, fmt::format("gap not decreasing for {} at t={}", f.label(), t));
      previous = gap;
      if (f.label() == "gaussian1") {
        gauss_err = std::max(gauss_err, std::abs(gap - gaussian_gap(t)));
        v.require(std::abs(gap - gaussian_gap(t)) <= 1e-5, fmt::format("Gaussian gap off at t={}", t));
      }
    }
  }
  const ConstantFit fit = fit_constant(checks);
  v.require(std::isfinite(fit.constant), "c not finite");
  for (const auto& c : checks) v.require(apply_constant(c, fit.constant).holds, c.inputs);
  v.note(fmt::format("c = {:.4g} at {}; Gaussian gap error {:.1e}", fit.constant, checks[fit.argmax].inputs, gauss_err));
  return v;
}

Verdict paouris(const AcceptanceOptions& opt) {
  Verdict v;
  std::vector<BoundCheck> tails;
  std::vector<BoundCheck> moments;
  double worst_moment = 0.0;
  double worst_tail = 0.0;
  for (const std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const double rn = std::sqrt(static_cast<double>(n));
    for (const auto& mu : catalog_nd(n)) {
      const bool gaussian = mu.label().rfind("gaussian", 0) == 0;
      for (const double r : {3.0, 4.0, 5.0}) {
        tails.push_back(check_paouris_tail(mu, r * rn, opt.mc_samples, opt.seed));
        if (gaussian) {
          const TailEstimate est = paouris_tail(mu, r * rn, opt.mc_samples, opt.seed);
          const double exact = gaussian_norm_tail(n, r * rn);
          const double sd = std::sqrt(exact * (1.0 - exact) / static_cast<double>(opt.mc_samples));
          const double allowed = kSigmas * sd + 1.0 / static_cast<double>(opt.mc_samples);
          worst_tail = std::max(worst_tail, std::abs(est.probability - exact) / allowed);
          v.require(std::abs(est.probability - exact) <= allowed,
                    fmt::format("chi tail n={} R={}sqrt(n): MC {:.3g} vs {:.3g}", n, r, est.probability, exact));
        }
      }
      for (const double p : {1.0, 2.0, 4.0, 8.0}) {
        moments.push_back(check_paouris_moment(mu, p, opt.mc_samples, opt.seed));
        if (gaussian && p == 2.0) {
          const MetricResult m = paouris_moment(mu, 2.0, opt.mc_samples, opt.seed);
          worst_moment = std::max(worst_moment, std::abs(m.value - rn) / four_sigma(m));
          v.require(std::abs(m.value - rn) <= four_sigma(m), fmt::format("(E|X|^2)^(1/2) off for n={}", n));
        }
      }
    }
  }
  const ConstantFit c_tail = fit_constant(tails);
  const ConstantFit c_mom = fit_constant(moments);
  v.require(std::isfinite(c_tail.constant) && c_tail.constant > 0.0, "tail constant not finite");
  v.require(std::isfinite(c_mom.constant) && c_mom.constant > 0.0, "moment constant not finite");
  v.note(fmt::format("C = {:.4g}, c = {:.4g} over {} tails / {} moments; Gaussian checks used {:.2f} / {:.2f} of "
                     "their bands",
                     c_mom.constant, 1.0 / c_tail.constant, tails.size(), moments.size(), worst_moment, worst_tail));
  return v;
}

Verdict bobkov_madiman(const AcceptanceOptions& opt) {
  Verdict v;
  std::vector<BoundCheck> checks;
  double worst = 0.0;
  for (const std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    for (const auto& mu : catalog_nd(n)) {
      const MetricResult var = bobkov_madiman_variance(mu, opt.mc_samples, opt.seed);
      checks.push_back(check_bobkov_madiman(mu, opt.mc_samples, opt.seed));
      const double half = 0.5 * static_cast<double>(n);
      if (mu.label().rfind("gaussian", 0) == 0) {
        worst = std::max(worst, std::abs(var.value - half) / four_sigma(var));
        v.require(std::abs(var.value - half) <= four_sigma(var),
                  fmt::format("Gaussian n={}: {:.4g} vs {}", n, var.value, half));
      }
      if (mu.label().rfind("uniform", 0) == 0) {
        v.require(var.value == 0.0, fmt::format("uniform n={}: variance {:.3g}", n, var.value));
      }
    }
  }
  const ConstantFit fit = fit_constant(checks);
  v.require(std::isfinite(fit.constant), "C not finite");
  for (const auto& c : checks) v.require(apply_constant(c, fit.constant).holds, c.inputs);
  v.note(fmt::format("C = {:.4g} at {}; Gaussian within {:.2f} of its band; uniform exactly 0", fit.constant,
                     checks[fit.argmax].inputs, worst));
  return v;
}

Verdict entropy_and_isotropic_constant(const AcceptanceOptions&) {
  Verdict v;
  std::vector<LogConcaveDensity> all = catalog_1d();
  for (const double t : {0.8, 0.4, 0.2, 0.1}) {
    all.push_back(interp(make_isotropic_uniform(1), t));
    all.push_back(interp(make_isotropic_laplace(1), t));
  }
  for (const std::size_t n : {2u, 4u, 8u, 16u}) {
    for (auto& d : catalog_nd(n)) all.push_back(std::move(d));
  }
  double min_slack = INFINITY;
  double max_lf = 0.0;
  for (const auto& d : all) {
    const BoundCheck h = check_max_entropy(d);
    const BoundCheck lf = check_isotropic_constant(d);
    min_slack = std::min(min_slack, h.slack);
    max_lf = std::max(max_lf, lf.lhs);
    v.require(h.slack >= -1e-7, fmt::format("entropy above Gaussian for {}", d.label()));
    v.require(lf.holds, fmt::format("L_f too large for {}", d.label()));
  }
  v.note(fmt::format("{} densities; min entropy slack {:.3g}; max L_f {:.4g}", all.size(), min_slack, max_lf));
  return v;
}

double abs_moment_1d(const Component1D& c, double k) {
  const Interval r = c.effective_support(1e-16);
  std::vector<double> pts{r.lo};
  for (const double b : c.breakpoints()) {
    if (b > r.lo && b < r.hi) pts.push_back(b);
  }
  if (r.lo < 0.0 && r.hi > 0.0) pts.push_back(0.0);
  pts.push_back(r.hi);
  std::sort(pts.begin(), pts.end());
  return numerics::integrate_pieces([&](double x) { return std::pow(std::abs(x), k) * c.pdf(x); }, pts).value;
}

Verdict convergence(const AcceptanceOptions& opt) {
  Verdict v;
  const std::vector<double> ts = {0.8, 0.4, 0.2, 0.1};
  for (const std::size_t n : {1u, 2u}) {
    for (const char* base_name : {"uniform", "laplace"}) {
      const LogConcaveDensity base =
          std::string(base_name) == "uniform" ? make_isotropic_uniform(n) : make_isotropic_laplace(n);
      const auto gamma = make_standard_gaussian(n);
      std::map<std::string, std::vector<MetricResult>> series;
      std::vector<double> m4;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto mu = interp(base, ts[i]);
        const PairMetrics m = compute_pair_metrics(mu, gamma, {4096, opt.mc_samples, opt.seed + i});
        series["bl"].push_back(m.bl_lower);
        series["tv"].push_back(m.tv);
        series["h"].push_back(m.h);
        const double m2 = abs_moment_1d(mu.factors()[0], 2.0);
        v.require(std::abs(m2 - 1.0) <= 1e-8, fmt::format("second moment {:.10g}", m2));
        m4.push_back(abs_moment_1d(mu.factors()[0], 4.0));
      }
      const std::string tag = fmt::format("{}{}", base_name, n);
      for (const auto& [name, s] : series) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
          v.require(s[i + 1].value <= s[i].value + s[i].abs_error + s[i + 1].abs_error,
                    fmt::format("{} {} rises from t={} to t={}", tag, name, ts[i], ts[i + 1]));
        }
        v.require(s.back().value <= 0.5 * s.front().value,
                  fmt::format("{} {}: t=0.1 value {:.3g} not below half of {:.3g}", tag, name, s.back().value,
                              s.front().value));
      }
      for (std::size_t i = 0; i + 1 < m4.size(); ++i) {
        v.require(std::abs(m4[i + 1] - 3.0) < std::abs(m4[i] - 3.0), fmt::format("{} fourth moment not approaching 3", tag));
      }
      v.note(fmt::format("{}: tv {:.2e}->{:.2e}, bl {:.2e}->{:.2e}, H {:.2e}->{:.2e}, E X^4 {:.4f}->{:.4f}", tag,
                         series["tv"].front().value, series["tv"].back().value, series["bl"].front().value,
                         series["bl"].back().value, series["h"].front().value, series["h"].back().value, m4.front(),
                         m4.back()));
    }
  }
  return v;
}

ExperimentConfig small_sweep_config(const AcceptanceOptions& opt, const std::filesystem::path& out) {
  const std::string json = fmt::format(R"({{
    "seed": {},
    "mc_samples": {},
    "grid_size": 4096,
    "out": "{}",
    "suite": [
      {{"id": "uniform-interp", "base": {{"family": "uniform", "n": 1}}, "t": [0.8, 0.4, 0.2, 0.1]}},
      {{"id": "laplace-interp", "base": {{"family": "laplace", "n": 1}}, "t": [0.8, 0.4, 0.2, 0.1]}},
      {{"id": "laplace-vs-uniform", "base": "laplace", "reference": "uniform"}}
    ]
  }})",
                                       opt.seed, std::min<std::size_t>(opt.mc_samples, 50000), out.generic_string());
  return parse_config(json);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Lines of the <metadata id="..."> block, comments dropped.
std::vector<std::vector<std::string>> metadata_rows(const std::string& svg, const std::string& id) {
  std::vector<std::vector<std::string>> rows;
  const auto open = svg.find(fmt::format("<metadata id=\"{}\">", id));
  if (open == std::string::npos) return rows;
  const auto body = svg.find('\n', open) + 1;
  const auto close = svg.find("</metadata>", body);
  std::istringstream lines(svg.substr(body, close - body));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> row;
    for (std::string f; fields >> f;) row.push_back(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

Verdict envelope_figure(const AcceptanceOptions& opt) {
  Verdict v;
  std::filesystem::create_directories(opt.scratch_dir);
  const auto bare = opt.scratch_dir / "envelope.svg";
  plot_envelope(bare);
  const auto rows = metadata_rows(slurp(bare), "envelope-samples");
  const std::vector<std::pair<double, double>> targets = {
      {1.0, 1.0}, {std::exp(-1.0), std::exp(-1.0)}, {std::exp(-2.0), 2.0 * std::exp(-2.0)}};
  for (const auto& [x, fx] : targets) {
    const auto it = std::find_if(rows.begin(), rows.end(), [x](const auto& r) { return std::stod(r[0]) == x; });
    v.require(it != rows.end(), fmt::format("x = {:.17g} not sampled", x));
    if (it != rows.end()) {
      const double got = std::stod((*it)[1]);
      v.require(std::abs(got - fx) <= 1e-12, fmt::format("f({:.6g}) = {:.17g}", x, got));
      v.note(fmt::format("f({:.6g}) err {:.1e}", x, std::abs(got - fx)));
    }
  }
  v.require(rows.size() >= 600, "too few samples");

  const ExperimentConfig cfg = small_sweep_config(opt, opt.scratch_dir / "sweep");
  const SweepResult result = run_sweep(cfg);
  write_sweep_outputs(result, cfg);
  const auto scatter = metadata_rows(slurp(cfg.out_dir / "envelope.svg"), "scatter");
  v.require(!scatter.empty(), "no scatter in the sweep figure");
  double worst = -INFINITY;
  for (const auto& r : scatter) {
    const double w1 = std::stod(r[1]);
    const double cap = std::stod(r[3]);
    worst = std::max(worst, w1 - cap);
    v.require(w1 <= cap * (1.0 + 1e-12), fmt::format("{} above the envelope", r.back()));
  }
  v.note(fmt::format("{} scatter points, max W1 - envelope {:.2e}", scatter.size(), worst));
  return v;
}

Verdict determinism(const AcceptanceOptions& opt) {
  Verdict v;
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const ExperimentConfig cfg = small_sweep_config(opt, opt.scratch_dir / fmt::format("rerun{}", run));
    write_sweep_outputs(run_sweep(cfg), cfg);
    for (const char* name : {"records.csv", "checks.csv", "fit.csv"}) outputs[run].push_back(slurp(cfg.out_dir / name));
  }
  for (std::size_t i = 0; i < outputs[0].size(); ++i) {
    v.require(!outputs[0][i].empty(), "empty output");
    v.require(outputs[0][i] == outputs[1][i], fmt::format("CSV {} differs between runs", i));
  }
  v.note(fmt::format("records.csv {} bytes identical across reruns", outputs[0][0].size()));
  return v;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
  const std::vector<std::tuple<int, const char*, std::function<Verdict(const AcceptanceOptions&)>>> criteria = {
      {1, "closed-form oracles", closed_forms},
      {2, "classical inequalities", classical_suite},
      {3, "reversed inequalities", reversed_suite},
      {4, "duality consistency", duality},
      {5, "min lemma", min_lemma},
      {6, "deconvolution lemma", eldan_klartag},
      {7, "Paouris tails and moments", paouris},
      {8, "log-density variance", bobkov_madiman},
      {9, "max entropy and isotropic constant", entropy_and_isotropic_constant},
      {10, "convergence along interpolation", convergence},
      {11, "envelope figure", envelope_figure},
      {12, "sweep determinism", determinism},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, name, fn] : criteria) {
    CriterionResult r{id, name, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Verdict v = fn(options);
      r.pass = v.pass;
      r.detail = v.detail();
    } catch (const std::exception& e) {
      r.detail = fmt::format("exception: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << fmt::format("{} {} {} ({:.1f}s): {}\n", r.pass ? "PASS" : "FAIL", id, name, r.seconds, r.detail)
        << std::flush;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace lcm
