#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "lcmetrics/harness.hpp"

namespace lcm {
namespace {

bool is_standard_gaussian(const LogConcaveDensity& d) {
  if (!d.is_product()) return false;
  return std::all_of(d.factors().begin(), d.factors().end(), [](const Component1D& c) {
    const auto* g = std::get_if<Gaussian1D>(&c.variant());
    return g != nullptr && g->mean == 0.0 && g->sd == 1.0;
  });
}

struct Point {
  ExperimentRecord record;
  PairMetrics pair;
  bool isotropic_pair = false;
};

std::string t_label(const std::optional<double>& t) { return t ? fmt::format("{}", *t) : std::string("NA"); }

// Quantile with linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  if (lo == hi || pos == static_cast<double>(lo)) return v[lo];  // keeps an infinite slack from becoming NaN
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

BoundCheck at_constant(BoundCheck check, std::optional<double> constant, double tolerance) {
  BoundCheck out = apply_constant(std::move(check), constant.value_or(1.0));
  out.constant = constant;
  out.tolerance += tolerance;
  out.holds = out.vacuous || out.slack >= -out.tolerance;
  return out;
}

void add_metrics(Point& p, const LogConcaveDensity& mu, const LogConcaveDensity& nu, const ExperimentConfig& cfg) {
  const auto want = [&](const char* id) {
    return std::find(cfg.metrics.begin(), cfg.metrics.end(), id) != cfg.metrics.end();
  };
  auto& m = p.record.metrics;
  const PairMetrics& pm = p.pair;
  if (want("tv")) m["tv"] = pm.tv;
  if (want("bl")) {
    MetricResult bl = pm.bl_lower;
    if (!pm.exact) bl.detail = fmt::format("lower end of [{}, {}]; {}", pm.bl_lower.value, pm.bl_upper.value, bl.detail);
    m["bl"] = bl;
  }
  if (want("kolmogorov") && pm.ks) m["kolmogorov"] = *pm.ks;
  if (want("w1")) m["w1"] = pm.w1;
  if (want("w2")) m["w2"] = pm.w2;
  if (want("w4")) m["w4"] = pm.w4;
  if (want("h")) m["h"] = pm.h;
  if (want("w1_dual") && pm.n == 1) m["w1_dual"] = w1_dual_1d(mu, nu);
  if (want("entropy")) m["entropy"] = differential_entropy(mu);
}

void add_checks(Point& p, const LogConcaveDensity& mu, const LogConcaveDensity& nu, const ExperimentConfig& cfg) {
  const auto want = [&](const char* id) {
    return std::find(cfg.bounds.begin(), cfg.bounds.end(), id) != cfg.bounds.end();
  };
  auto& out = p.record.checks;
  const PairMetrics& pm = p.pair;
  const std::size_t n = pm.n;
  const std::uint64_t seed = p.record.seed;
  const bool against_gaussian = is_standard_gaussian(nu);

  if (want("classical-bl-tv")) out.push_back(check_classical_bl_tv(pm));
  if (want("classical-bl-w1")) out.push_back(check_classical_bl_w1(pm));
  if (want("wp-monotone")) {
    for (auto& c : check_wp_monotone(pm)) out.push_back(std::move(c));
  }
  if (want("kolmogorov-tv") && pm.ks) out.push_back(check_kolmogorov_tv(pm));
  if (want("pinsker")) out.push_back(check_pinsker(pm));

  if (p.isotropic_pair) {
    if (want("tv-bl")) out.push_back(check_tv_bl(pm));
    if (want("w1-bl")) out.push_back(check_w1_bl(pm));
    if (want("bhvv") && n == 1 && against_gaussian) out.push_back(check_bhvv(pm));
    if (against_gaussian) {
      if (want("h-tv")) out.push_back(check_h_tv(pm));
      if (want("h-tv-bounded-Lf")) out.push_back(check_h_tv_bounded_lf(pm));
    }
  }

  if (!mu.is_isotropic()) return;
  if (want("eldan-klartag") && n == 1) {
    for (const double t : cfg.lemma_t) {
      BoundCheck c = check_eldan_klartag(mu, t);
      c.variant = fmt::format("t={}", t);
      out.push_back(std::move(c));
    }
  }
  const double rn = std::sqrt(static_cast<double>(n));
  if (want("paouris-tail")) {
    for (const double r : cfg.paouris_r) {
      BoundCheck c = check_paouris_tail(mu, r * rn, cfg.mc_samples, seed);
      c.variant = fmt::format("R={}sqrt(n)", r);
      out.push_back(std::move(c));
    }
  }
  if (want("paouris-moment")) {
    for (const double q : cfg.paouris_p) {
      BoundCheck c = check_paouris_moment(mu, q, cfg.mc_samples, seed);
      c.variant = fmt::format("p={}", q);
      out.push_back(std::move(c));
    }
  }
  if (want("bobkov-madiman")) out.push_back(check_bobkov_madiman(mu, cfg.mc_samples, seed));
  if (want("max-entropy")) out.push_back(check_max_entropy(mu));
  if (want("isotropic-constant")) out.push_back(check_isotropic_constant(mu));
}

}  // namespace

bool has_free_constant(std::string_view bound_id) {
  static const std::set<std::string_view> kFree = {"tv-bl",         "bhvv",          "w1-bl",          "wq-wp",
                                                   "h-tv",          "h-tv-bounded-Lf", "eldan-klartag", "paouris-tail",
                                                   "paouris-moment", "bobkov-madiman"};
  return kFree.contains(bound_id);
}

std::string fit_group(const BoundCheck& check) {
  return check.bound_id == "wq-wp" ? check.key() : check.bound_id;
}

std::vector<FitRow> refit(std::vector<ExperimentRecord>& records, double tolerance) {
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> by_id;
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t k = 0; k < records[r].checks.size(); ++k) {
      const BoundCheck& c = records[r].checks[k];
      by_id[fit_group(c)].emplace_back(r, k);
    }
  }

  std::vector<FitRow> rows;
  for (const auto& [id, where] : by_id) {
    FitRow row;
    row.key = id;
    row.has_constant = has_free_constant(records[where.front().first].checks[where.front().second].bound_id);
    row.instances = where.size();
    std::vector<BoundCheck> suite;
    for (const auto& [r, k] : where) suite.push_back(records[r].checks[k]);

    std::optional<double> constant;
    if (row.has_constant) {
      const bool all_vacuous = std::all_of(suite.begin(), suite.end(), [](const BoundCheck& c) { return c.vacuous; });
      if (all_vacuous) {
        row.vacuous = true;
        row.used = 0;
      } else {
        const ConstantFit fit = fit_constant(suite);
        constant = fit.constant;
        row.constant = fit.constant;
        row.used = fit.used;
        const auto& rec = records[where[fit.argmax].first];
        row.argmax = fmt::format("{}@{} {}", rec.pair_id, t_label(rec.t), suite[fit.argmax].inputs);
        if (!suite[fit.argmax].variant.empty()) row.argmax += " [" + suite[fit.argmax].variant + "]";
      }
    } else {
      row.used = static_cast<std::size_t>(
          std::count_if(suite.begin(), suite.end(), [](const BoundCheck& c) { return !c.vacuous; }));
      row.vacuous = row.used == 0;
    }

    std::vector<double> slacks;
    for (const auto& [r, k] : where) {
      BoundCheck& c = records[r].checks[k];
      c = at_constant(std::move(c), constant, tolerance);
      slacks.push_back(c.slack);
      row.failures += c.holds ? 0 : 1;
    }
    std::sort(slacks.begin(), slacks.end());
    for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0}) row.slack_quantiles.push_back(quantile_sorted(slacks, q));
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  if (cfg.suite.empty()) throw ConfigError("suite is empty");
  const MetricOptions base_opt{cfg.grid_size, cfg.mc_samples, cfg.seed};

  std::vector<Point> points;
  for (const SuiteEntry& entry : cfg.suite) {
    const LogConcaveDensity nu = build_distribution(entry.reference);
    std::vector<std::optional<double>> ts;
    for (const double t : entry.t) ts.emplace_back(t);
    if (ts.empty()) ts.emplace_back(std::nullopt);
    for (const auto& t : ts) {
      const auto start = std::chrono::steady_clock::now();
      DistributionSpec spec = entry.base;
      spec.t = t;
      const LogConcaveDensity mu = build_distribution(spec);

      Point p;
      p.record.pair_id = entry.id;
      p.record.n = mu.dimension();
      p.record.t = t;
      p.record.seed = cfg.seed ^ stable_hash(fmt::format("{}@{}", entry.id, t_label(t)));
      MetricOptions opt = base_opt;
      opt.seed = p.record.seed;
      p.pair = compute_pair_metrics(mu, nu, opt);
      p.isotropic_pair = mu.is_isotropic() && nu.is_isotropic();
      add_metrics(p, mu, nu, cfg);
      add_checks(p, mu, nu, cfg);
      p.record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      points.push_back(std::move(p));
    }
  }

  std::stable_sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    if (a.record.pair_id != b.record.pair_id) return a.record.pair_id < b.record.pair_id;
    return a.record.t < b.record.t;
  });

  SweepResult result;
  // The wq-wp inner constant comes from the moment fit, so that fit goes first.
  std::vector<BoundCheck> moments;
  for (const auto& p : points) {
    for (const auto& c : p.record.checks) {
      if (c.bound_id == "paouris-moment") moments.push_back(c);
    }
  }
  const bool moments_usable =
      std::any_of(moments.begin(), moments.end(), [](const BoundCheck& c) { return !c.vacuous; });
  if (moments_usable) result.inner_constant = fit_constant(moments).constant;

  const bool want_wq = std::find(cfg.bounds.begin(), cfg.bounds.end(), "wq-wp") != cfg.bounds.end();
  for (auto& p : points) {
    // In n dimensions W_1 and W_4 are coupling upper bounds, so the check is one-dimensional.
    if (want_wq && p.isotropic_pair && p.pair.n == 1) {
      for (const auto& [lo, hi] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{2, 4}}) {
        p.record.checks.push_back(check_wq_wp(p.pair, lo, hi, result.inner_constant));
      }
    }
    std::sort(p.record.checks.begin(), p.record.checks.end(),
              [](const BoundCheck& a, const BoundCheck& b) { return a.key() < b.key(); });
    result.records.push_back(std::move(p.record));
  }
  result.fits = refit(result.records, cfg.tolerance);
  return result;
}

std::size_t count_failures(const SweepResult& result) {
  std::size_t failures = 0;
  for (const auto& r : result.records) {
    for (const auto& c : r.checks) failures += c.holds ? 0 : 1;
  }
  return failures;
}

}  // namespace lcm
