#include "rugged/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "rugged/errors.hpp"

namespace rugged {
namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

bool is_cga(const std::string& label) { return label == "cga" || label.rfind("cga/", 0) == 0; }

// Colour by algorithm, dash pattern by noise model.
std::string colour_for(const std::string& label, std::map<std::string, std::size_t>& colours) {
  const std::string algo = label.substr(0, label.find('/'));
  const auto [it, inserted] = colours.try_emplace(algo, colours.size());
  return kPalette[it->second % std::size(kPalette)];
}

}  // namespace

ChartSpec chart_from_aggregate(std::span<const AggregateRow> rows, bool include_cga) {
  if (rows.empty()) throw ConfigError("aggregate table is empty");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> points;
  for (const auto& r : rows) {
    if (!include_cga && is_cga(r.algorithm)) continue;
    if (!points.contains(r.algorithm)) order.push_back(r.algorithm);
    points[r.algorithm].emplace_back(static_cast<double>(r.n), r.mean_pct);
  }
  if (order.empty()) throw ConfigError("aggregate table has no series to plot");
  ChartSpec spec;
  for (const auto& label : order) {
    auto& pts = points[label];
    std::sort(pts.begin(), pts.end());
    ChartSeries s{label, {}, {}};
    for (const auto& [x, y] : pts) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
    spec.series.push_back(std::move(s));
  }
  validate_chart(spec);
  return spec;
}

void validate_chart(const ChartSpec& spec) {
  if (spec.series.empty()) throw ConfigError("chart has no series");
  const auto& grid = spec.series.front().x;
  if (grid.empty()) throw ConfigError("chart series are empty");
  for (const auto& s : spec.series) {
    if (s.x != grid) throw ConfigError("series '" + s.label + "' does not share the x-grid");
    if (s.y.size() != s.x.size()) throw ConfigError("series '" + s.label + "' has mismatched lengths");
    for (double y : s.y) {
      if (!(y >= 0.0 && y <= 100.0)) throw ConfigError("series '" + s.label + "' has y outside [0,100]");
    }
  }
}

std::string render_svg(const ChartSpec& spec) {
  validate_chart(spec);
  const auto& grid = spec.series.front().x;
  const double x_min = grid.front();
  const double x_max = grid.back();
  double y_lo = 100.0;
  double y_hi = 0.0;
  for (const auto& s : spec.series) {
    for (double y : s.y) {
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  y_lo = std::max(0.0, std::floor(y_lo / 5.0) * 5.0 - 5.0);
  y_hi = std::min(100.0, std::ceil(y_hi / 5.0) * 5.0 + 5.0);
  if (y_hi <= y_lo) y_hi = y_lo + 5.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return x_max == x_min ? kLeft + plot_w / 2 : kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth, "%.0f")
      << "\" height=\"" << num(kHeight, "%.0f") << "\" viewBox=\"0 0 " << num(kWidth, "%.0f") << ' '
      << num(kHeight, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth, "%.0f") << "\" height=\"" << num(kHeight, "%.0f")
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(spec.title) << "</text>\n";

  // Grid and y ticks.
  const double y_step = (y_hi - y_lo) > 30.0 ? 10.0 : 5.0;
  svg << "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double y = y_lo; y <= y_hi + 1e-9; y += y_step) {
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft + plot_w)
        << "\" y2=\"" << num(py(y)) << "\"/>\n";
  }
  svg << "</g>\n<g class=\"y-ticks\" text-anchor=\"end\">\n";
  for (double y = y_lo; y <= y_hi + 1e-9; y += y_step) {
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\">" << num(y, "%.0f") << "</text>\n";
  }
  svg << "</g>\n<g class=\"x-ticks\" text-anchor=\"middle\">\n";
  for (double x : grid) {
    svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + plot_h + 18) << "\">" << num(x, "%.0f")
        << "</text>\n";
  }
  svg << "</g>\n";

  // Axes.
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(kLeft + plot_w)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
      << num(kTop + plot_h) << "\"/>\n</g>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 18)
      << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(kTop + plot_h / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n";

  // Series.
  std::map<std::string, std::size_t> colours;
  std::size_t index = 0;
  for (const auto& s : spec.series) {
    const std::string colour = colour_for(s.label, colours);
    const bool dashed = s.label.find("/geometric") != std::string::npos;
    svg << "<g class=\"series\" data-label=\"" << xml_escape(s.label) << "\" stroke=\"" << colour
        << "\" fill=\"" << colour << "\">\n";
    svg << "<polyline fill=\"none\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
        << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\" data-n=\""
          << num(s.x[i], "%.0f") << "\" data-pct=\"" << num(s.y[i], "%.6f") << "\"/>\n";
    }
    svg << "</g>\n";

    const double ly = kTop + 10.0 + 22.0 * static_cast<double>(index);
    const double lx = kLeft + plot_w + 20.0;
    svg << "<g class=\"legend\">\n<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 30)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n<text x=\"" << num(lx + 38) << "\" y=\""
        << num(ly + 4) << "\">" << xml_escape(s.label) << "</text>\n</g>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rugged
