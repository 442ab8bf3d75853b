#include "rbnedit/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

namespace rbnedit {
namespace {

constexpr double kPanelW = 440.0, kPanelH = 330.0;
constexpr double kLeft = 58.0, kRight = 16.0, kTop = 30.0, kBottom = 46.0;

constexpr const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60",
                                    "#8e44ad", "#e67e22", "#16a085",
                                    "#7f8c8d", "#2c3e50"};
constexpr int kPaletteSize = 8;

std::string coord(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

void append_text(std::string& out, double x, double y, const std::string& text,
                 const char* anchor, double size) {
  out += "<text x=\"" + coord(x) + "\" y=\"" + coord(y) +
         "\" font-family=\"sans-serif\" font-size=\"" + coord(size) +
         "\" text-anchor=\"" + anchor + "\">" + escape(text) + "</text>\n";
}

void append_line(std::string& out, double x1, double y1, double x2, double y2,
                 const char* stroke, double width) {
  out += "<line x1=\"" + coord(x1) + "\" y1=\"" + coord(y1) + "\" x2=\"" +
         coord(x2) + "\" y2=\"" + coord(y2) + "\" stroke=\"" + stroke +
         "\" stroke-width=\"" + coord(width) + "\"/>\n";
}

void render_panel(std::string& out, const SvgPanel& panel, double ox) {
  const double plot_w = kPanelW - kLeft - kRight;
  const double plot_h = kPanelH - kTop - kBottom;
  const double px = ox + kLeft, py = kTop;

  double x_min = 0.0, x_max = 1.0;
  bool have_x = false;
  for (const SvgSeries& s : panel.series) {
    for (double v : s.x) {
      if (!have_x) {
        x_min = x_max = v;
        have_x = true;
      } else {
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
      }
    }
  }
  if (!have_x) x_min = 0.0, x_max = 1.0;
  if (x_max <= x_min) x_max = x_min + 1.0;
  double y_min = panel.y_min, y_max = panel.y_max;
  if (y_max <= y_min) y_max = y_min + 1.0;

  auto sx = [&](double v) {
    return px + (v - x_min) / (x_max - x_min) * plot_w;
  };
  auto sy = [&](double v) {
    return py + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
  };

  append_text(out, ox + kPanelW / 2.0, kTop - 10.0, panel.title, "middle",
              13.0);
  append_line(out, px, py, px, py + plot_h, "#333333", 1.0);
  append_line(out, px, py + plot_h, px + plot_w, py + plot_h, "#333333", 1.0);

  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    const double tx = sx(fx), ty = sy(fy);
    append_line(out, tx, py + plot_h, tx, py + plot_h + 4.0, "#333333", 1.0);
    append_text(out, tx, py + plot_h + 16.0, tick_text(fx), "middle", 10.0);
    append_line(out, px - 4.0, ty, px, ty, "#333333", 1.0);
    append_text(out, px - 7.0, ty + 3.5, tick_text(fy), "end", 10.0);
  }
  append_text(out, px + plot_w / 2.0, kPanelH - 10.0, panel.x_label, "middle",
              11.0);
  append_text(out, ox + 14.0, py - 8.0, panel.y_label, "start", 11.0);

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const SvgSeries& s = panel.series[si];
    const char* color = kPalette[si % kPaletteSize];
    if (!s.y_lo.empty()) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double cx = sx(s.x[i]);
        append_line(out, cx, sy(s.y_lo[i]), cx, sy(s.y_hi[i]), color, 0.8);
        append_line(out, cx - 3.0, sy(s.y_lo[i]), cx + 3.0, sy(s.y_lo[i]),
                    color, 0.8);
        append_line(out, cx - 3.0, sy(s.y_hi[i]), cx + 3.0, sy(s.y_hi[i]),
                    color, 0.8);
      }
    }
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out += ' ';
      out += coord(sx(s.x[i])) + ',' + coord(sy(s.y[i]));
    }
    out += "\"/>\n";
    const double ly = py + 12.0 + 13.0 * static_cast<double>(si);
    append_line(out, px + plot_w - 86.0, ly - 3.5, px + plot_w - 72.0,
                ly - 3.5, color, 2.0);
    append_text(out, px + plot_w - 68.0, ly, s.label, "start", 10.0);
  }
}

}  // namespace

std::string render_chart(std::span<const SvgPanel> panels) {
  const double width = kPanelW * static_cast<double>(panels.size());
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) +
         "\" height=\"" + coord(kPanelH) + "\" viewBox=\"0 0 " + coord(width) +
         " " + coord(kPanelH) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    render_panel(out, panels[i], kPanelW * static_cast<double>(i));
  out += "</svg>\n";
  return out;
}

std::string figure_to_svg(const FigureDataset& d) {
  SvgPanel fit, pct;
  fit.y_min = pct.y_min = 0.0;
  fit.y_max = pct.y_max = 1.0;
  fit.y_label = "fitness";
  pct.y_label = "%gRNA (0-1)";

  if (d.figure_id == "fig8") {
    fit.title = d.figure_id + " fitness";
    pct.title = d.figure_id + " %gRNA";
    fit.x_label = pct.x_label = "generation";
    std::map<std::tuple<int, int, int>, std::pair<SvgSeries, SvgSeries>>
        groups;
    for (const SeriesRow& row : d.series) {
      auto& [f, g] = groups[{row.b, row.k, row.c}];
      if (f.label.empty()) {
        f.label = "B=" + std::to_string(row.b) + " K=" + std::to_string(row.k);
        g.label = f.label;
      }
      f.x.push_back(row.generation);
      f.y.push_back(row.fitness);
      g.x.push_back(row.generation);
      g.y.push_back(row.pct_grna);
    }
    for (auto& [key, pair] : groups) {
      fit.series.push_back(std::move(pair.first));
      pct.series.push_back(std::move(pair.second));
    }
  } else {
    fit.title = d.figure_id + " fitness";
    pct.title = d.figure_id + " %gRNA";
    fit.x_label = pct.x_label = "B";
    std::map<std::pair<std::string, int>,
             std::vector<const FigureCellRow*>>
        groups;
    for (const FigureCellRow& cell : d.cells)
      groups[{cell.mode, cell.k}].push_back(&cell);
    const bool multi_mode =
        !groups.empty() &&
        groups.begin()->first.first != groups.rbegin()->first.first;
    for (auto& [key, cells] : groups) {
      std::sort(cells.begin(), cells.end(),
                [](const FigureCellRow* a, const FigureCellRow* b) {
                  return a->b < b->b;
                });
      SvgSeries f, g;
      f.label = "K=" + std::to_string(key.second);
      if (multi_mode) f.label = key.first + " " + f.label;
      g.label = f.label;
      for (const FigureCellRow* cell : cells) {
        f.x.push_back(cell->b);
        f.y.push_back(cell->agg.mean_fitness);
        f.y_lo.push_back(cell->agg.min_fitness);
        f.y_hi.push_back(cell->agg.max_fitness);
        g.x.push_back(cell->b);
        g.y.push_back(cell->agg.mean_pct_grna);
        g.y_lo.push_back(cell->agg.min_pct_grna);
        g.y_hi.push_back(cell->agg.max_pct_grna);
      }
      fit.series.push_back(std::move(f));
      pct.series.push_back(std::move(g));
    }
  }

  const SvgPanel panels[2] = {std::move(fit), std::move(pct)};
  return render_chart(panels);
}

}  // namespace rbnedit
