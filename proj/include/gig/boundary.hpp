#pragma once

#include <vector>

#include "gig/model.hpp"

namespace gig {

// Per-feature sorted, exactly-deduplicated split thresholds of every
// tree ensemble in a graph.
struct BoundaryTable {
  std::vector<std::vector<double>> thresholds;  // indexed by feature

  bool empty() const {
    for (const auto& t : thresholds)
      if (!t.empty()) return false;
    return true;
  }
};

// |x - b| <= 1e-12 * max(1, |b|) counts as "on" threshold b.
bool on_threshold(double x, double b);

struct PathQuery {
  FeatureVector s;
  FeatureVector e;
};

// One merged internal discontinuity of a path. `lo`/`hi` hold the
// extreme thresholds matched per feature (equal unless distinct
// thresholds fell inside the grouping tolerance); probes displace from
// these so the corner spans the whole cluster.
struct Crossing {
  double alpha = 0.0;
  std::vector<int> features;  // sorted, nonempty
  std::vector<double> lo;
  std::vector<double> hi;
  FeatureVector point;
  int radix() const { return static_cast<int>(features.size()); }
};

BoundaryTable extract_boundaries(const CompositionGraph& g);

// Interior crossings sorted by alpha. Hits sharing an alpha within
// 1e-12 merge into one crossing (that is how radix > 1 arises);
// alpha = 0 and alpha = 1 incidences are excluded here and belong to
// the endpoint terms.
std::vector<Crossing> enumerate_crossings(const BoundaryTable& table, const PathQuery& q);

// Features of x lying on some threshold, sorted.
std::vector<int> endpoint_radix(const BoundaryTable& table, const FeatureVector& x);

// Positive step delta such that displacing any crossing point or
// endpoint by +-delta on any subset of axes stays strictly inside one
// grid cell. Returns 1 when there is nothing to clear.
double safe_step(const BoundaryTable& table, const std::vector<Crossing>& crossings,
                 const PathQuery& q);

}  // namespace gig
