#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "lcmetrics/harness.hpp"

namespace lcm {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;
constexpr double kXMax = 1.5;
constexpr int kSamples = 600;

std::string escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

double envelope(double x) { return std::max(1.0, std::log(1.0 / x)) * x; }

std::string envelope_svg(const std::vector<ScatterPoint>& points, double constant) {
  std::vector<double> xs;
  for (int i = 1; i <= kSamples; ++i) xs.push_back(kXMax * i / kSamples);
  xs.push_back(1.0);
  xs.push_back(std::exp(-1.0));
  xs.push_back(std::exp(-2.0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double y_max = envelope(kXMax);
  for (const auto& p : points) y_max = std::max(y_max, p.w1);
  y_max *= 1.05;
  const auto px = [](double x) { return kMargin + (kWidth - 2 * kMargin) * x / kXMax; };
  const auto py = [y_max](double y) { return kHeight - kMargin - (kHeight - 2 * kMargin) * y / y_max; };

  std::string svg = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);

  svg += "<metadata id=\"envelope-samples\">\n# x f(x) with f(x) = max{1, log(1/x)} x\n";
  for (const double x : xs) svg += fmt::format("{:.17g} {:.17g}\n", x, envelope(x));
  svg += "</metadata>\n";
  if (!points.empty()) {
    svg += fmt::format("<metadata id=\"scatter\">\n# constant {:.17g}\n# d_BL W_1 n envelope label\n", constant);
    for (const auto& p : points) {
      const double rn = std::sqrt(static_cast<double>(p.n));
      svg += fmt::format("{:.17g} {:.17g} {} {:.17g} {}\n", p.bl, p.w1, p.n,
                         p.bl > 0.0 ? constant * rn * envelope(p.bl / rn) : 0.0, escape(p.label));
    }
    svg += "</metadata>\n";
  }

  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes and ticks.
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", px(0), py(0), px(kXMax));
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", px(0), py(0), py(y_max));
  for (const double x : {0.0, 0.5, 1.0, 1.5}) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:g}</text>\n", px(x),
                       py(0) + 18, x);
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y_max * i / 4.0;
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.2f}</text>\n", px(0) - 6,
                       py(y) + 4, y);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">x</text>\n", px(kXMax / 2),
                     kHeight - 12);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\">max{{1, log(1/x)}} x</text>\n", px(0.05), kMargin - 18);
  // Marker at x = 1/e, where the two branches meet.
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                     px(std::exp(-1.0)), py(0), py(y_max));

  std::string path;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    path += fmt::format("{}{:.3f},{:.3f}", i == 0 ? "M" : " L", px(xs[i]), py(envelope(xs[i])));
  }
  svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>\n", path);
  if (!points.empty() && constant != 1.0) {
    std::string scaled;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      scaled += fmt::format("{}{:.3f},{:.3f}", i == 0 ? "M" : " L", px(xs[i]),
                            py(std::min(constant * envelope(xs[i]), y_max)));
    }
    svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" "
                       "stroke-dasharray=\"6 4\"/>\n",
                       scaled);
  }
  for (const auto& p : points) {
    svg += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\" fill=\"#e67e22\"><title>{}</title></circle>\n",
                       px(std::min(p.bl, kXMax)), py(p.w1), escape(p.label));
  }
  svg += "</svg>\n";
  return svg;
}

void plot_envelope(const std::filesystem::path& path, const std::vector<ScatterPoint>& points, double constant) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << envelope_svg(points, constant);
  if (!out) throw ConfigError(fmt::format("failed writing {}", path.string()));
}

std::vector<ScatterPoint> scatter_from(const SweepResult& result) {
  std::vector<ScatterPoint> points;
  for (const auto& r : result.records) {
    const auto bl = r.metrics.find("bl");
    const auto w1 = r.metrics.find("w1");
    if (bl == r.metrics.end() || w1 == r.metrics.end()) continue;
    points.push_back({bl->second.value, w1->second.value, r.n,
                      fmt::format("{}@{}", r.pair_id, r.t ? fmt::format("{}", *r.t) : "NA")});
  }
  return points;
}

}  // namespace lcm
