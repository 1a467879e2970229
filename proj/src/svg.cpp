#include "qbf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qbf {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::vector<double>& x, const std::vector<double>& y,
                         std::string color, std::string label, bool dashed, bool step) {
  series_.push_back({x, y, std::move(color), std::move(label), dashed, step});
}

void SvgPlot::add_band(const std::vector<double>& x, const std::vector<double>& lo,
                       const std::vector<double>& hi, std::string color) {
  bands_.push_back({x, lo, hi, std::move(color)});
}

void SvgPlot::add_vline(double x, std::string color) { vlines_.emplace_back(x, std::move(color)); }
void SvgPlot::add_hline(double y, std::string color) { hlines_.emplace_back(y, std::move(color)); }
void SvgPlot::add_note(std::string text) { notes_.push_back(std::move(text)); }

std::string SvgPlot::render(int width, int height) const {
  const double left = 70, right = 20, top = 40, bottom = 55 + 16.0 * static_cast<double>(notes_.size());
  const double pw = width - left - right, ph = height - top - bottom;

  Range xr, yr;
  for (const auto& s : series_) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  for (const auto& b : bands_) {
    for (double v : b.x) xr.add(v);
    for (double v : b.lo) yr.add(v);
    for (double v : b.hi) yr.add(v);
  }
  for (const auto& [v, c] : vlines_) xr.add(v);
  for (const auto& [v, c] : hlines_) yr.add(v);
  xr.finish();
  yr.finish();
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title_) << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(xv))
       << "\" y2=\"" << num(top + ph) << "\" stroke=\"#eeeeee\"/>\n";
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(left + pw)
       << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#eeeeee\"/>\n";
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + ph + 16)
       << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
       << tick_label(yv) << "</text>\n";
  }

  for (const auto& b : bands_) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < b.x.size(); ++i)
      if (std::isfinite(b.hi[i])) pts << num(px(b.x[i])) << ',' << num(py(b.hi[i])) << ' ';
    for (std::size_t i = b.x.size(); i-- > 0;)
      if (std::isfinite(b.lo[i])) pts << num(px(b.x[i])) << ',' << num(py(b.lo[i])) << ' ';
    os << "<polygon points=\"" << pts.str() << "\" fill=\"" << b.color
       << "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
  }
  for (const auto& [v, c] : hlines_)
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(left + pw)
       << "\" y2=\"" << num(py(v)) << "\" stroke=\"" << c << "\" stroke-dasharray=\"2,3\"/>\n";
  for (const auto& [v, c] : vlines_)
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(v))
       << "\" y2=\"" << num(top + ph) << "\" stroke=\"" << c << "\" stroke-dasharray=\"6,4\"/>\n";

  double legend_y = top + 14;
  for (const auto& s : series_) {
    std::ostringstream pts;
    bool have_prev = false;
    double prev_y = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) {
        have_prev = false;
        continue;
      }
      if (s.step && have_prev) pts << num(px(s.x[i])) << ',' << num(py(prev_y)) << ' ';
      pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      prev_y = s.y[i];
      have_prev = true;
    }
    os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n";
    if (!s.label.empty()) {
      os << "<line x1=\"" << num(left + pw - 150) << "\" y1=\"" << num(legend_y - 4) << "\" x2=\""
         << num(left + pw - 125) << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
         << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n";
      os << "<text x=\"" << num(left + pw - 120) << "\" y=\"" << num(legend_y) << "\">"
         << escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }

  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(top + ph + 34)
     << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num(top + ph / 2) << ")\">" << escape(y_label_) << "</text>\n";
  double note_y = top + ph + 52;
  for (const auto& n : notes_) {
    os << "<text x=\"" << num(left) << "\" y=\"" << num(note_y) << "\" font-size=\"11\">" << escape(n)
       << "</text>\n";
    note_y += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qbf
