#include "texturalyze/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace texturalyze::svg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Extent {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Extent of(std::initializer_list<double> seed) {
    Extent e;
    e.lo = *seed.begin();
    e.hi = *seed.begin();
    for (double v : seed) e.include(v);
    return e;
  }
  void pad(double frac) {
    double span = hi - lo;
    if (span <= 0) span = std::max(1.0, std::fabs(hi));
    lo -= frac * span;
    hi += frac * span;
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  double span = hi - lo;
  if (!(span > 0)) return {lo};
  double raw = span / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(t == 0.0 ? 0.0 : t);  // normalize -0
  return ticks;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Frame {
  double x0, y0, x1, y1;  // pixel bounds of the plot area
  Extent xe, ye;
  double px(double x) const { return x0 + (x - xe.lo) / (xe.hi - xe.lo) * (x1 - x0); }
  double py(double y) const { return y1 - (y - ye.lo) / (ye.hi - ye.lo) * (y1 - y0); }
};

void open_svg(std::string& s) {
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n";
  s += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
}

void add_metadata(std::string& s, const std::string& data_csv) {
  s += "<metadata id=\"data-table\"><![CDATA[\n";
  s += data_csv;
  s += "]]></metadata>\n";
}

void add_title(std::string& s, const std::string& title) {
  s += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       escape(title) + "</text>\n";
}

void draw_axes(std::string& s, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  s += "<rect x=\"" + num(f.x0) + "\" y=\"" + num(f.y0) + "\" width=\"" +
       num(f.x1 - f.x0) + "\" height=\"" + num(f.y1 - f.y0) +
       "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (double t : nice_ticks(f.xe.lo, f.xe.hi)) {
    double x = f.px(t);
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(f.y1) + "\" x2=\"" + num(x) +
         "\" y2=\"" + num(f.y1 + 5) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(f.y1 + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(t) +
         "</text>\n";
  }
  for (double t : nice_ticks(f.ye.lo, f.ye.hi)) {
    double y = f.py(t);
    s += "<line x1=\"" + num(f.x0 - 5) + "\" y1=\"" + num(y) + "\" x2=\"" +
         num(f.x0) + "\" y2=\"" + num(y) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + num(f.x0 - 8) + "\" y=\"" + num(y + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(t) +
         "</text>\n";
  }
  s += "<text x=\"" + num(0.5 * (f.x0 + f.x1)) + "\" y=\"" + num(f.y1 + 38) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + escape(x_label) +
       "</text>\n";
  s += "<text x=\"18\" y=\"" + num(0.5 * (f.y0 + f.y1)) +
       "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
       num(0.5 * (f.y0 + f.y1)) + ")\">" + escape(y_label) + "</text>\n";
}

}  // namespace

std::string render_bar_panels(const std::string& title,
                              const std::vector<BarPanel>& panels,
                              const std::string& data_csv) {
  std::string s;
  open_svg(s);
  add_metadata(s, data_csv);
  add_title(s, title);

  size_t n = std::max<size_t>(panels.size(), 1);
  int ncol = n <= 2 ? static_cast<int>(n) : (n <= 4 ? 2 : 3);
  int nrow = static_cast<int>((n + ncol - 1) / ncol);
  double cell_w = (kWidth - 40.0) / ncol;
  double cell_h = (kHeight - 60.0) / nrow;

  for (size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    int row = static_cast<int>(p) / ncol;
    int col = static_cast<int>(p) % ncol;
    double ox = 20.0 + col * cell_w;
    double oy = 50.0 + row * cell_h;
    Frame f;
    f.x0 = ox + 46;
    f.x1 = ox + cell_w - 10;
    f.y0 = oy + 22;
    f.y1 = oy + cell_h - 34;
    f.xe = {0.0, static_cast<double>(panel.bars.size())};
    f.ye = Extent::of({0.0});
    for (const auto& [label, value] : panel.bars) f.ye.include(value);
    f.ye.pad(0.05);

    s += "<text x=\"" + num(0.5 * (f.x0 + f.x1)) + "\" y=\"" + num(oy + 14) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(panel.title) +
         "</text>\n";
    s += "<rect x=\"" + num(f.x0) + "\" y=\"" + num(f.y0) + "\" width=\"" +
         num(f.x1 - f.x0) + "\" height=\"" + num(f.y1 - f.y0) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
    for (double t : nice_ticks(f.ye.lo, f.ye.hi, 4)) {
      double y = f.py(t);
      s += "<text x=\"" + num(f.x0 - 4) + "\" y=\"" + num(y + 3) +
           "\" text-anchor=\"end\" font-size=\"9\">" + tick_label(t) +
           "</text>\n";
    }
    double slot = (f.x1 - f.x0) / std::max<size_t>(panel.bars.size(), 1);
    double zero_y = f.py(std::max(0.0, f.ye.lo));
    for (size_t b = 0; b < panel.bars.size(); ++b) {
      const auto& [label, value] = panel.bars[b];
      double bx = f.x0 + slot * (static_cast<double>(b) + 0.2);
      double bw = slot * 0.6;
      double by = f.py(value);
      double top = std::min(by, zero_y);
      double h = std::fabs(zero_y - by);
      s += "<rect x=\"" + num(bx) + "\" y=\"" + num(top) + "\" width=\"" +
           num(bw) + "\" height=\"" + num(h) + "\" fill=\"" +
           kPalette[b % 8] + "\"/>\n";
      s += "<text x=\"" + num(bx + 0.5 * bw) + "\" y=\"" + num(f.y1 + 11) +
           "\" text-anchor=\"middle\" font-size=\"8\">" + escape(label) +
           "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::string render_scatter(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<LabeledPoint>& points,
                           double fit_slope, double fit_intercept,
                           const std::string& annotation,
                           const std::string& data_csv) {
  std::string s;
  open_svg(s);
  add_metadata(s, data_csv);
  add_title(s, title);

  Frame f{70, 50, 770, 540, {}, {}};
  if (!points.empty()) {
    f.xe.lo = f.xe.hi = points[0].x;
    f.ye.lo = f.ye.hi = points[0].y;
  }
  for (const auto& p : points) {
    f.xe.include(p.x);
    f.ye.include(p.y);
  }
  f.xe.pad(0.08);
  f.ye.pad(0.08);
  draw_axes(s, f, x_label, y_label);

  if (std::isfinite(fit_slope)) {
    double ya = fit_intercept + fit_slope * f.xe.lo;
    double yb = fit_intercept + fit_slope * f.xe.hi;
    s += "<line x1=\"" + num(f.px(f.xe.lo)) + "\" y1=\"" + num(f.py(ya)) +
         "\" x2=\"" + num(f.px(f.xe.hi)) + "\" y2=\"" + num(f.py(yb)) +
         "\" stroke=\"#d62728\" stroke-dasharray=\"5 3\"/>\n";
  }
  for (const auto& p : points) {
    s += "<circle cx=\"" + num(f.px(p.x)) + "\" cy=\"" + num(f.py(p.y)) +
         "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    if (!p.label.empty())
      s += "<text x=\"" + num(f.px(p.x) + 6) + "\" y=\"" + num(f.py(p.y) - 6) +
           "\" font-size=\"10\">" + escape(p.label) + "</text>\n";
  }
  if (!annotation.empty())
    s += "<text x=\"80\" y=\"66\" font-size=\"12\">" + escape(annotation) +
         "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string render_biplot(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<LabeledPoint>& rows,
                          const std::vector<LabeledPoint>& cols,
                          const std::vector<Arrow>& vectors,
                          const std::string& data_csv) {
  std::string s;
  open_svg(s);
  add_metadata(s, data_csv);
  add_title(s, title);

  Frame f{90, 50, 750, 540, {}, {}};
  f.xe = Extent::of({0.0});
  f.ye = Extent::of({0.0});
  for (const auto& p : rows) {
    f.xe.include(p.x);
    f.ye.include(p.y);
  }
  for (const auto& p : cols) {
    f.xe.include(p.x);
    f.ye.include(p.y);
  }
  // Symmetric limits keep the origin centered and the geometry readable.
  double span = std::max({std::fabs(f.xe.lo), std::fabs(f.xe.hi),
                          std::fabs(f.ye.lo), std::fabs(f.ye.hi), 1e-9});
  span *= 1.15;
  f.xe = {-span, span};
  f.ye = {-span, span};
  draw_axes(s, f, x_label, y_label);

  s += "<line x1=\"" + num(f.px(0)) + "\" y1=\"" + num(f.y0) + "\" x2=\"" +
       num(f.px(0)) + "\" y2=\"" + num(f.y1) +
       "\" stroke=\"#cccccc\" stroke-dasharray=\"3 3\"/>\n";
  s += "<line x1=\"" + num(f.x0) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" +
       num(f.x1) + "\" y2=\"" + num(f.py(0)) +
       "\" stroke=\"#cccccc\" stroke-dasharray=\"3 3\"/>\n";

  // Supplementary vectors, scaled to half the plot range.
  for (const auto& v : vectors) {
    double x = 0.5 * span * v.dx;
    double y = 0.5 * span * v.dy;
    s += "<line x1=\"" + num(f.px(0)) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" +
         num(f.px(x)) + "\" y2=\"" + num(f.py(y)) +
         "\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + num(f.px(x) + 4) + "\" y=\"" + num(f.py(y) - 2) +
         "\" font-size=\"10\" fill=\"#2ca02c\">" + escape(v.label) +
         "</text>\n";
  }
  for (const auto& p : cols) {
    s += "<rect x=\"" + num(f.px(p.x) - 3) + "\" y=\"" + num(f.py(p.y) - 3) +
         "\" width=\"6\" height=\"6\" fill=\"#d62728\"/>\n";
    s += "<text x=\"" + num(f.px(p.x) + 5) + "\" y=\"" + num(f.py(p.y) + 4) +
         "\" font-size=\"10\" fill=\"#d62728\">" + escape(p.label) +
         "</text>\n";
  }
  for (const auto& p : rows) {
    s += "<circle cx=\"" + num(f.px(p.x)) + "\" cy=\"" + num(f.py(p.y)) +
         "\" r=\"5\" fill=\"#1f77b4\"/>\n";
    s += "<text x=\"" + num(f.px(p.x) + 6) + "\" y=\"" + num(f.py(p.y) - 6) +
         "\" font-size=\"11\" fill=\"#1f77b4\">" + escape(p.label) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string render_lines(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series,
                         const std::string& data_csv) {
  std::string s;
  open_svg(s);
  add_metadata(s, data_csv);
  add_title(s, title);

  Frame f{70, 50, 640, 540, {}, {}};
  bool first = true;
  for (const auto& ser : series)
    for (const auto& p : ser.points) {
      if (first) {
        f.xe.lo = f.xe.hi = p.x;
        f.ye.lo = f.ye.hi = p.y;
        first = false;
      }
      f.xe.include(p.x);
      f.ye.include(p.y);
    }
  f.xe.pad(0.05);
  f.ye.pad(0.05);
  draw_axes(s, f, x_label, y_label);

  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % 8];
    std::string pts;
    for (const auto& p : series[i].points) {
      if (!pts.empty()) pts += " ";
      pts += num(f.px(p.x)) + "," + num(f.py(p.y));
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    double ly = 60.0 + 16.0 * static_cast<double>(i);
    s += "<line x1=\"655\" y1=\"" + num(ly - 4) + "\" x2=\"675\" y2=\"" +
         num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"680\" y=\"" + num(ly) + "\" font-size=\"11\">" +
         escape(series[i].name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace texturalyze::svg
