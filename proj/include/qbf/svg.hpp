#pragma once

#include <string>
#include <vector>

namespace qbf {

/// Minimal SVG line chart: step or polyline series, shaded bands, reference
/// lines and a labelled frame. Non-finite points are skipped.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(const std::vector<double>& x, const std::vector<double>& y, std::string color,
                  std::string label, bool dashed = false, bool step = false);
  void add_band(const std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi, std::string color);
  void add_vline(double x, std::string color);
  void add_hline(double y, std::string color);
  void add_note(std::string text);

  std::string render(int width = 720, int height = 440) const;

 private:
  struct Series {
    std::vector<double> x, y;
    std::string color, label;
    bool dashed, step;
  };
  struct Band {
    std::vector<double> x, lo, hi;
    std::string color;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<Band> bands_;
  std::vector<std::pair<double, std::string>> vlines_, hlines_;
  std::vector<std::string> notes_;
};

}  // namespace qbf
