#include "gig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gig {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

SvgDoc::SvgDoc(double width, double height) : width_(width), height_(height) {}

void SvgDoc::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                  double width) {
  elements_.push_back("<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                      "\" y2=\"" + num(y2) + "\" stroke=\"" + esc(stroke) + "\" stroke-width=\"" +
                      num(width) + "\"/>");
}

void SvgDoc::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
  elements_.push_back("<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
                      "\" fill=\"" + esc(fill) + "\" fill-opacity=\"" + num(opacity) + "\"/>");
}

void SvgDoc::rect(double x, double y, double w, double h, const std::string& fill,
                  const std::string& stroke) {
  elements_.push_back("<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
                      "\" height=\"" + num(h) + "\" fill=\"" + esc(fill) + "\" stroke=\"" +
                      esc(stroke) + "\"/>");
}

void SvgDoc::text(double x, double y, const std::string& content, int font_size,
                  const std::string& anchor) {
  elements_.push_back("<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
                      std::to_string(font_size) + "\" font-family=\"sans-serif\" text-anchor=\"" +
                      esc(anchor) + "\">" + esc(content) + "</text>");
}

std::string SvgDoc::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
         "\" fill=\"white\"/>\n";
  for (const auto& e : elements_) {
    out += e;
    out += '\n';
  }
  out += "</svg>\n";
  return out;
}

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo < hi)) {
      lo -= 1.0;
      hi += 1.0;
    }
    double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
  double map(double v, double out_lo, double out_hi) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  const double w = 560, h = 420, ml = 64, mr = 16, mt = 36, mb = 48;
  SvgDoc doc(w, h);
  Range rx, ry;
  for (const auto& p : points) {
    rx.add(p.x);
    ry.add(p.y);
  }
  if (points.empty()) {
    rx.add(0);
    ry.add(0);
  }
  rx.pad();
  ry.pad();

  doc.text(w / 2, mt - 14, title, 14, "middle");
  doc.line(ml, h - mb, w - mr, h - mb, "#333");
  doc.line(ml, mt, ml, h - mb, "#333");
  for (int t = 0; t <= 4; ++t) {
    double fx = rx.lo + (rx.hi - rx.lo) * t / 4;
    double px = rx.map(fx, ml, w - mr);
    doc.line(px, h - mb, px, h - mb + 4, "#333");
    doc.text(px, h - mb + 18, num(fx), 10, "middle");
    double fy = ry.lo + (ry.hi - ry.lo) * t / 4;
    double py = ry.map(fy, h - mb, mt);
    doc.line(ml - 4, py, ml, py, "#333");
    doc.text(ml - 6, py + 3, num(fy), 10, "end");
  }
  doc.text(w / 2, h - 10, x_label, 12, "middle");
  doc.text(14, mt - 8, y_label, 12, "start");

  for (const auto& p : points) {
    const char* color = kPalette[std::max(0, p.group) % 6];
    doc.circle(rx.map(p.x, ml, w - mr), ry.map(p.y, h - mb, mt), 2.0, color, 0.55);
  }
  return doc.str();
}

std::string histogram_panels_svg(const std::vector<std::vector<double>>& series,
                                 const std::vector<std::string>& names, int bins) {
  const double w = 560, panel_h = 180, ml = 64, mr = 16, mt = 28, mb = 30;
  const double h = panel_h * series.size();
  SvgDoc doc(w, std::max(panel_h, h));

  for (size_t s = 0; s < series.size(); ++s) {
    double top = panel_h * s;
    Range rx;
    for (double v : series[s]) rx.add(v);
    if (series[s].empty()) rx.add(0);
    rx.pad();
    std::vector<int> counts(bins, 0);
    for (double v : series[s]) {
      int b = static_cast<int>((v - rx.lo) / (rx.hi - rx.lo) * bins);
      counts[std::clamp(b, 0, bins - 1)]++;
    }
    int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));

    doc.text(w / 2, top + mt - 10, names.size() > s ? names[s] : "series", 13, "middle");
    doc.line(ml, top + panel_h - mb, w - mr, top + panel_h - mb, "#333");
    double bw = (w - ml - mr) / bins;
    for (int b = 0; b < bins; ++b) {
      double bh = (panel_h - mt - mb) * counts[b] / peak;
      if (counts[b] > 0)
        doc.rect(ml + b * bw, top + panel_h - mb - bh, bw, bh, kPalette[s % 6], "#333");
    }
    doc.text(ml, top + panel_h - mb + 16, num(rx.lo), 10, "start");
    doc.text(w - mr, top + panel_h - mb + 16, num(rx.hi), 10, "end");
  }
  return doc.str();
}

}  // namespace gig
