// Minimal deterministic SVG line charts: fixed canvas, fixed float
// formatting, no timestamps or generator tags, so identical inputs render
// byte-identical files.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "rbnedit/experiments.hpp"

namespace rbnedit {

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;        // one point per index
  std::vector<double> y_lo, y_hi;  // min/max whiskers; empty or same length
};

struct SvgPanel {
  std::string title;
  std::string x_label, y_label;
  double y_min = 0.0, y_max = 1.0;
  std::vector<SvgSeries> series;
};

std::string render_chart(std::span<const SvgPanel> panels);

// Aggregate figures plot fitness and %gRNA against B, one series per K
// with min/max whiskers; fig8 plots the logged per-generation series.
std::string figure_to_svg(const FigureDataset& d);

}  // namespace rbnedit
