#pragma once

#include <string>
#include <vector>

namespace texturalyze::svg {

// All charts are 800x600, deterministic byte-for-byte for identical inputs,
// and embed their data table as CSV inside a <metadata> element.

struct LabeledPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;  // empty = unlabeled marker
};

struct Series {
  std::string name;
  std::vector<LabeledPoint> points;
};

struct BarPanel {
  std::string title;
  std::vector<std::pair<std::string, double>> bars;  // label, value
};

struct Arrow {
  double dx = 0.0;
  double dy = 0.0;
  std::string label;
};

std::string render_bar_panels(const std::string& title,
                              const std::vector<BarPanel>& panels,
                              const std::string& data_csv);

std::string render_scatter(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<LabeledPoint>& points,
                           double fit_slope, double fit_intercept,
                           const std::string& annotation,
                           const std::string& data_csv);

// Symmetric map: two point families plus supplementary vectors from the
// origin, scaled to half the plot range.
std::string render_biplot(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<LabeledPoint>& rows,
                          const std::vector<LabeledPoint>& cols,
                          const std::vector<Arrow>& vectors,
                          const std::string& data_csv);

std::string render_lines(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series,
                         const std::string& data_csv);

}  // namespace texturalyze::svg
