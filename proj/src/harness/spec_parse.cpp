#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "lcmetrics/harness.hpp"

namespace lcm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("distribution spec: '{}' is not a number for {}", text, key));
  }
  return v;
}

bool known_param(const std::string& family, const std::string& key) {
  if (family == "gaussian") return key == "mean" || key == "sd";
  if (family == "uniform") return key == "center" || key == "half_width";
  if (family == "laplace") return key == "center" || key == "rate";
  return false;
}

double param(const DistributionSpec& s, const char* key, double fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

}  // namespace

DistributionSpec parse_distribution_spec(std::string_view text) {
  text = trim(text);
  DistributionSpec spec;
  const auto colon = text.find(':');
  spec.family = std::string(trim(text.substr(0, colon)));
  if (spec.family.empty()) throw ConfigError("distribution spec: missing family");
  if (colon == std::string_view::npos) return spec;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const std::string key(trim(item.substr(0, eq)));
    if (eq == std::string_view::npos) {
      if (key != "whiten") throw ConfigError(fmt::format("distribution spec: unknown flag '{}'", key));
      spec.whiten = true;
      continue;
    }
    const std::string_view value = trim(item.substr(eq + 1));
    if (key == "n") {
      const double n = parse_number(key, value);
      if (n < 1 || n != std::floor(n)) throw ConfigError("distribution spec: n must be a positive integer");
      spec.n = static_cast<std::size_t>(n);
    } else if (key == "t") {
      spec.t = parse_number(key, value);
    } else {
      spec.params[key] = parse_number(key, value);
    }
  }
  return spec;
}

std::string to_string(const DistributionSpec& spec) {
  std::string out = spec.family;
  std::vector<std::string> items;
  if (spec.n != 1) items.push_back(fmt::format("n={}", spec.n));
  for (const auto& [k, v] : spec.params) items.push_back(fmt::format("{}={}", k, v));
  if (spec.whiten) items.emplace_back("whiten");
  if (spec.t) items.push_back(fmt::format("t={}", *spec.t));
  if (!items.empty()) out += ":" + fmt::format("{}", fmt::join(items, ","));
  return out;
}

LogConcaveDensity build_distribution(const DistributionSpec& spec) {
  if (spec.family != "gaussian" && spec.family != "uniform" && spec.family != "laplace") {
    throw ConfigError(fmt::format("unknown family '{}'", spec.family));
  }
  if (spec.n == 0) throw ConfigError("dimension must be positive");
  for (const auto& [k, v] : spec.params) {
    if (!known_param(spec.family, k)) throw ConfigError(fmt::format("{} has no parameter '{}'", spec.family, k));
  }
  if (spec.whiten && spec.params.empty()) throw ConfigError("whiten needs raw parameters");

  const auto member = [&]() -> LogConcaveDensity {
    const std::size_t n = spec.n;
    if (spec.params.empty()) {
      if (spec.family == "gaussian") return make_standard_gaussian(n);
      if (spec.family == "uniform") return make_isotropic_uniform(n);
      return make_isotropic_laplace(n);
    }
    try {
      if (spec.family == "gaussian") {
        const double sd = param(spec, "sd", 1.0);
        return make_gaussian(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), param(spec, "mean", 0.0)),
                             sd * sd * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                                 static_cast<Eigen::Index>(n)));
      }
      if (spec.family == "uniform") {
        return make_uniform_box(
            std::vector<Uniform1D>(n, Uniform1D{param(spec, "center", 0.0), param(spec, "half_width", 1.0)}));
      }
      return make_laplace_product(
          std::vector<Laplace1D>(n, Laplace1D{param(spec, "center", 0.0), param(spec, "rate", 1.0)}));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("{}: {}", to_string(spec), e.what()));
    }
  };

  LogConcaveDensity d = member();
  if (spec.whiten) d = whiten(d, d.mean(), d.covariance());
  if (spec.t) {
    if (!(*spec.t >= 0.0 && *spec.t <= 1.0)) throw ConfigError("t must lie in [0, 1]");
    try {
      d = convolve_interpolate(d, *spec.t);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("{}: {}", to_string(spec), e.what()));
    }
  }
  return d;
}

}  // namespace lcm
