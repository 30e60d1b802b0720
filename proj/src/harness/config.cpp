#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "lcmetrics/harness.hpp"

namespace lcm {
namespace {

using nlohmann::json;

DistributionSpec spec_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_distribution_spec(j.get<std::string>());
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object or a spec string", where));
  DistributionSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "family") {
      s.family = value.get<std::string>();
    } else if (key == "n") {
      if (!value.is_number_unsigned() || value.get<std::size_t>() == 0) {
        throw ConfigError(fmt::format("{}: n must be a positive integer", where));
      }
      s.n = value.get<std::size_t>();
    } else if (key == "whiten") {
      s.whiten = value.get<bool>();
    } else if (key == "params") {
      for (const auto& [pk, pv] : value.items()) s.params[pk] = pv.get<double>();
    } else {
      throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
  if (s.family.empty()) throw ConfigError(fmt::format("{}: missing family", where));
  return s;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void require_known(const std::vector<std::string>& ids, const std::vector<std::string>& known, const char* what) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ConfigError(fmt::format("unknown {} id '{}'", what, id));
    }
    if (!seen.insert(id).second) throw ConfigError(fmt::format("duplicate {} id '{}'", what, id));
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> kKeys = {"suite",     "metrics",   "bounds",    "grid_size",
                                              "mc_samples", "seed",      "tolerance", "lemma_t",
                                              "paouris_r",  "paouris_p", "out"};
  for (const auto& [key, _] : root.items()) {
    if (!kKeys.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
  }

  ExperimentConfig c;
  try {
    if (!root.contains("seed") || !root.at("seed").is_number_unsigned()) {
      throw ConfigError("config needs a nonnegative integer seed");
    }
    c.seed = root.at("seed").get<std::uint64_t>();
    c.metrics = get_or(root, "metrics", c.metrics);
    c.bounds = get_or(root, "bounds", c.bounds);
    c.grid_size = get_or(root, "grid_size", c.grid_size);
    c.mc_samples = get_or(root, "mc_samples", c.mc_samples);
    c.tolerance = get_or(root, "tolerance", c.tolerance);
    c.lemma_t = get_or(root, "lemma_t", c.lemma_t);
    c.paouris_r = get_or(root, "paouris_r", c.paouris_r);
    c.paouris_p = get_or(root, "paouris_p", c.paouris_p);
    if (root.contains("out")) c.out_dir = root.at("out").get<std::string>();

    if (!root.contains("suite") || !root.at("suite").is_array()) throw ConfigError("config needs a suite array");
    std::set<std::string> ids;
    for (const auto& e : root.at("suite")) {
      SuiteEntry entry;
      entry.id = e.at("id").get<std::string>();
      if (entry.id.empty() || !ids.insert(entry.id).second) {
        throw ConfigError(fmt::format("suite ids must be nonempty and unique ('{}')", entry.id));
      }
      entry.base = spec_from_json(e.at("base"), entry.id + ".base");
      entry.reference = e.contains("reference")
                            ? spec_from_json(e.at("reference"), entry.id + ".reference")
                            : DistributionSpec{"gaussian", entry.base.n, {}, false, std::nullopt};
      entry.t = get_or(e, "t", std::vector<double>{});
      if (entry.base.t) throw ConfigError(fmt::format("{}: give t values in the entry, not in base", entry.id));
      c.suite.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config schema error: {}", e.what()));
  }

  if (c.suite.empty()) throw ConfigError("suite is empty");
  if (c.grid_size < 16) throw ConfigError("grid_size must be at least 16");
  if (c.mc_samples < 100) throw ConfigError("mc_samples must be at least 100");
  if (!(c.tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  require_known(c.metrics, kMetricIds, "metric");
  require_known(c.bounds, kSweepBoundIds, "bound");
  for (const double p : c.paouris_p) {
    if (!(p >= 1.0 && p <= 10.0)) throw ConfigError("paouris_p values must lie in [1, 10]");
  }
  for (const double r : c.paouris_r) {
    if (!(r > 0.0)) throw ConfigError("paouris_r values must be positive");
  }
  for (const double t : c.lemma_t) {
    if (!(t > 0.0)) throw ConfigError("lemma_t values must be positive");
  }
  for (const auto& e : c.suite) {
    if (e.reference.n != e.base.n) throw ConfigError(fmt::format("{}: base and reference dimensions differ", e.id));
    for (const double t : e.t) {
      if (!(t >= 0.0 && t <= 1.0)) throw ConfigError(fmt::format("{}: t must lie in [0, 1]", e.id));
    }
    // Surface bad families and parameters before any work starts.
    build_distribution(e.base);
    build_distribution(e.reference);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace lcm
