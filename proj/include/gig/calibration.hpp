#pragma once

#include <vector>

#include "gig/model.hpp"

namespace gig {

// Monotone piecewise-linear approximation of the empirical CDF,
// mapping scores to approximate ranks in [0, 1].
struct EcdfFit {
  size_t samples_seen = 0;
  int knot_count = 64;
  PiecewiseLinearCurve curve;
};

// Knot inputs sit at evenly spaced empirical quantiles, knot outputs at
// the quantile levels; tied knot inputs collapse keeping the last
// occurrence (right-continuity). Throws ModelError on fewer than two
// distinct scores.
EcdfFit fit_ecdf(const std::vector<double>& scores, int knot_count = 64);

double ecdf_transform(const EcdfFit& fit, double score);
double ecdf_derivative(const EcdfFit& fit, double score);

}  // namespace gig
