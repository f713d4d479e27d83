#pragma once

#include <span>
#include <string>
#include <vector>

#include "rugged/harness.hpp"

namespace rugged {

struct ChartSeries {
  std::string label;
  std::vector<double> x;  // n
  std::vector<double> y;  // mean % ones
};

struct ChartSpec {
  std::vector<ChartSeries> series;
  std::string title = "Percentage of ones in the sampled search point after n^2 iterations";
  std::string x_label = "n";
  std::string y_label = "mean % of ones";
};

/// One series per algorithm label, x sorted ascending. cGA series are left
/// out unless `include_cga`. Throws ConfigError if the input is empty or the
/// series do not share one x-grid.
ChartSpec chart_from_aggregate(std::span<const AggregateRow> rows, bool include_cga);

/// Throws ConfigError unless every series shares the x-grid and y in [0, 100].
void validate_chart(const ChartSpec& spec);

/// Self-contained SVG 1.1 line chart. Each data point is a <circle> carrying
/// data-n and data-pct attributes with the plotted values.
std::string render_svg(const ChartSpec& spec);

}  // namespace rugged
