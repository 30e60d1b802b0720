#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "lcmetrics/harness.hpp"

namespace lcm {
namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string t_field(const std::optional<double>& t) { return t ? num(*t) : std::string("NA"); }

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError(fmt::format("checks.csv: bad number '{}'", s));
  return v;
}

const std::vector<std::string> kCheckColumns = {"pair_id", "n",     "t",         "seed",     "bound_id",
                                                "variant", "lhs",   "lhs_error", "rhs_unit", "rhs_unit_error",
                                                "constant", "rhs",  "slack",     "tolerance", "holds",
                                                "vacuous", "inputs"};

}  // namespace

void write_records_csv(const SweepResult& result, const ExperimentConfig& config, std::ostream& out) {
  std::vector<std::string> metrics = config.metrics;
  std::sort(metrics.begin(), metrics.end());
  std::set<std::string> keys;
  for (const auto& r : result.records) {
    for (const auto& c : r.checks) keys.insert(c.key());
  }
  std::vector<std::string> header = {"pair_id", "n", "t"};
  header.insert(header.end(), metrics.begin(), metrics.end());
  for (const auto& k : keys) header.push_back("slack_" + k);
  write_row(out, header);

  for (const auto& r : result.records) {
    std::vector<std::string> row = {r.pair_id, std::to_string(r.n), t_field(r.t)};
    for (const auto& m : metrics) {
      const auto it = r.metrics.find(m);
      row.push_back(it == r.metrics.end() ? "NA" : num(it->second.value));
    }
    for (const auto& k : keys) {
      const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const BoundCheck& c) { return c.key() == k; });
      row.push_back(it == r.checks.end() ? "NA" : num(it->slack));
    }
    write_row(out, row);
  }
}

void write_checks_csv(const SweepResult& result, std::ostream& out) {
  write_row(out, kCheckColumns);
  for (const auto& r : result.records) {
    for (const auto& c : r.checks) {
      write_row(out, {r.pair_id, std::to_string(r.n), t_field(r.t), std::to_string(r.seed), c.bound_id, c.variant,
                      num(c.lhs), num(c.lhs_error), num(c.rhs_unit), num(c.rhs_unit_error),
                      c.constant ? num(*c.constant) : "NA", num(c.rhs), num(c.slack), num(c.tolerance),
                      c.holds ? "1" : "0", c.vacuous ? "1" : "0", c.inputs});
    }
  }
}

std::vector<ExperimentRecord> read_checks_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_row(line) != kCheckColumns) {
    throw ConfigError("checks.csv: unexpected header");
  }
  std::vector<ExperimentRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_row(line);
    if (f.size() != kCheckColumns.size()) throw ConfigError(fmt::format("checks.csv:{}: wrong field count", line_no));
    try {
      std::optional<double> t;
      if (f[2] != "NA") t = parse_double(f[2]);
      if (records.empty() || records.back().pair_id != f[0] || records.back().t != t) {
        ExperimentRecord r;
        r.pair_id = f[0];
        r.n = std::stoul(f[1]);
        r.t = t;
        r.seed = std::stoull(f[3]);
        records.push_back(std::move(r));
      }
      BoundCheck c = make_check(f[4], f[5], parse_double(f[6]), parse_double(f[7]), parse_double(f[8]),
                                parse_double(f[9]), f[16]);
      c.vacuous = f[15] == "1";
      records.back().checks.push_back(std::move(c));
    } catch (const std::logic_error& e) {
      throw ConfigError(fmt::format("checks.csv:{}: {}", line_no, e.what()));
    }
  }
  if (records.empty()) throw ConfigError("checks.csv: no checks");
  return records;
}

void write_fit_csv(const std::vector<FitRow>& fits, std::ostream& out) {
  write_row(out, {"bound", "constant", "instances", "used", "failures", "slack_min", "slack_q25", "slack_median",
                  "slack_q75", "slack_max", "argmax"});
  for (const auto& f : fits) {
    std::vector<std::string> row = {f.key};
    if (f.vacuous) {
      row.emplace_back("vacuous");
    } else {
      row.push_back(f.has_constant ? num(f.constant) : "fixed");
    }
    row.push_back(std::to_string(f.instances));
    row.push_back(std::to_string(f.used));
    row.push_back(std::to_string(f.failures));
    for (const double q : f.slack_quantiles) row.push_back(num(q));
    row.push_back(f.argmax);
    write_row(out, row);
  }
}

void write_summary(const SweepResult& result, std::ostream& out) {
  std::size_t checks = 0;
  for (const auto& r : result.records) checks += r.checks.size();
  out << fmt::format("records: {}\nchecks: {}\nfailures: {}\nwq-wp inner constant c: {:.6g}\n\n",
                     result.records.size(), checks, count_failures(result), result.inner_constant);
  for (const auto& f : result.fits) {
    if (f.vacuous) {
      out << fmt::format("{}: vacuous ({} instances)\n", f.key, f.instances);
      continue;
    }
    if (f.has_constant) {
      out << fmt::format("{}: C = {:.6g} over {} of {} instances, attained at {}\n", f.key, f.constant, f.used,
                         f.instances, f.argmax);
    } else {
      out << fmt::format("{}: fixed constant, {} instances\n", f.key, f.instances);
    }
    const auto& q = f.slack_quantiles;
    out << fmt::format("  slack min {:.3e}  q25 {:.3e}  median {:.3e}  q75 {:.3e}  max {:.3e}  failures {}\n", q[0],
                       q[1], q[2], q[3], q[4], f.failures);
  }
}

void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory {}: {}", config.out_dir.string(), ec.message()));
  const auto open = [&](const char* name) {
    std::ofstream f(config.out_dir / name, std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot write {}", (config.out_dir / name).string()));
    return f;
  };
  {
    auto f = open("records.csv");
    write_records_csv(result, config, f);
  }
  {
    auto f = open("checks.csv");
    write_checks_csv(result, f);
  }
  {
    auto f = open("fit.csv");
    write_fit_csv(result.fits, f);
  }
  {
    auto f = open("summary.txt");
    write_summary(result, f);
  }
  {
    auto f = open("timing.txt");
    for (const auto& r : result.records) f << fmt::format("{}@{} {:.3f}s\n", r.pair_id, t_field(r.t), r.wall_seconds);
  }
  const auto w1bl = std::find_if(result.fits.begin(), result.fits.end(),
                                 [](const FitRow& f) { return f.key == "w1-bl" && !f.vacuous; });
  plot_envelope(config.out_dir / "envelope.svg", scatter_from(result), w1bl == result.fits.end() ? 1.0 : w1bl->constant);
}

}  // namespace lcm
