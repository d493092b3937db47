#pragma once

#include <string>
#include <vector>

namespace gig {

// Minimal static SVG writer; no timestamps so output is byte-stable.
class SvgDoc {
 public:
  SvgDoc(double width, double height);

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1.0);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none");
  void text(double x, double y, const std::string& content, int font_size = 12,
            const std::string& anchor = "start");
  std::string str() const;

 private:
  double width_, height_;
  std::vector<std::string> elements_;
};

struct ScatterPoint {
  double x, y;
  int group;  // colors by group (label)
};

// Value-vs-credit scatter with axes and tick labels.
std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

// One histogram panel per series, stacked vertically in a single file.
std::string histogram_panels_svg(const std::vector<std::vector<double>>& series,
                                 const std::vector<std::string>& names, int bins = 40);

}  // namespace gig
