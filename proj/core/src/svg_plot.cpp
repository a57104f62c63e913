#include "tailsitter/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace tailsitter::svg {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kGap = 30.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 2000;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      const double pad = std::max(std::abs(lo) * 0.05, 0.5);
      lo -= pad;
      hi += pad;
    }
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_figure(std::ostream& out, const std::string& title, const std::string& x_label,
                  const std::vector<Panel>& panels) {
  const double height = kTop + panels.size() * kPanelHeight + (panels.size() - 1) * kGap + kBottom;
  const double plot_w = kWidth - kLeft - kRight;

  Range xr;
  for (const auto& p : panels) {
    for (const auto& s : p.series) {
      for (double v : s.x) xr.add(v);
    }
  }
  xr.finish();
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      kWidth, height);
  out << fmt::format("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  out << fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + plot_w / 2, escape(title));

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const auto& panel = panels[pi];
    const double top = kTop + pi * (kPanelHeight + kGap);
    Range yr;
    for (const auto& s : panel.series) {
      for (double v : s.y) yr.add(v);
    }
    for (const auto& r : panel.ref_lines) yr.add(r.y);
    yr.finish();
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;
    auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * kPanelHeight; };

    out << fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                       "stroke=\"#444\"/>\n",
                       kLeft, top, plot_w, kPanelHeight);

    const double ys = nice_step(yr.hi - yr.lo, 5);
    for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi; v += ys) {
      const double y = py(v);
      out << fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#e5e5e5\"/>\n",
                         kLeft, y, kLeft + plot_w, y);
      out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", kLeft - 6, y + 4,
                         std::abs(v) < ys * 1e-9 ? 0.0 : v);
    }
    out << fmt::format("<text transform=\"translate({:.1f},{:.1f}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
                       kLeft - 55, top + kPanelHeight / 2, escape(panel.y_label));

    for (const auto& r : panel.ref_lines) {
      const double y = py(r.y);
      out << fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#555\" "
                         "stroke-dasharray=\"2,3\"/>\n",
                         kLeft, y, kLeft + plot_w, y);
      if (!r.label.empty()) {
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"#555\">{}</text>\n", kLeft + plot_w + 6, y + 4,
                           escape(r.label));
      }
    }

    for (std::size_t si = 0; si < panel.series.size(); ++si) {
      const auto& s = panel.series[si];
      const char* color = kColors[si % std::size(kColors)];
      const std::size_t n = std::min(s.x.size(), s.y.size());
      const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
      std::string points;
      auto flush = [&] {
        if (points.empty()) return;
        out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.4\"{} points=\"{}\"/>\n", color,
                           s.dashed ? " stroke-dasharray=\"6,4\"" : "", points);
        points.clear();
      };
      for (std::size_t i = 0; i < n; i += stride) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          flush();
          continue;
        }
        points += fmt::format("{:.1f},{:.1f} ", px(s.x[i]), py(s.y[i]));
      }
      flush();
      const double ly = top + 16 + 16 * si;
      out << fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
                         "stroke-width=\"2\"{}/>\n",
                         kLeft + plot_w + 8, ly - 4, kLeft + plot_w + 30, ly - 4, color,
                         s.dashed ? " stroke-dasharray=\"6,4\"" : "");
      out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + plot_w + 34, ly, escape(s.label));
    }
  }

  const double bottom = kTop + panels.size() * kPanelHeight + (panels.size() - 1) * kGap;
  const double xs = nice_step(xr.hi - xr.lo, 8);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + xs * 1e-9; v += xs) {
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(v), bottom + 16,
                       std::abs(v) < xs * 1e-9 ? 0.0 : v);
  }
  out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + plot_w / 2,
                     bottom + 36, escape(x_label));
  out << "</svg>\n";
}

}  // namespace tailsitter::svg
