#include "gig/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace gig {

EcdfFit fit_ecdf(const std::vector<double>& scores, int knot_count) {
  if (knot_count < 2) throw ModelError("fit_ecdf: need at least 2 knots");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty() || sorted.front() == sorted.back())
    throw ModelError("fit_ecdf: need at least 2 distinct score values");
  for (double v : sorted)
    if (!std::isfinite(v)) throw ModelError("fit_ecdf: non-finite score");

  const size_t n = sorted.size();
  EcdfFit fit;
  fit.samples_seen = n;
  fit.knot_count = knot_count;

  for (int j = 0; j < knot_count; ++j) {
    double level = static_cast<double>(j) / (knot_count - 1);
    size_t idx = static_cast<size_t>(std::llround(level * static_cast<double>(n - 1)));
    double input = sorted[idx];
    if (!fit.curve.xs.empty() && input == fit.curve.xs.back()) {
      fit.curve.ys.back() = level;  // keep the last occurrence
    } else {
      fit.curve.xs.push_back(input);
      fit.curve.ys.push_back(level);
    }
  }
  return fit;
}

double ecdf_transform(const EcdfFit& fit, double score) { return fit.curve.eval(score); }

double ecdf_derivative(const EcdfFit& fit, double score) { return fit.curve.derivative(score); }

}  // namespace gig
