#include "gig/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gig {

bool on_threshold(double x, double b) {
  return std::abs(x - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

BoundaryTable extract_boundaries(const CompositionGraph& g) {
  BoundaryTable table;
  table.thresholds.resize(g.n_features);
  for (const GraphNode& n : g.nodes) {
    if (n.kind != NodeKind::tree_ensemble) continue;
    for (const Tree& t : n.ensemble.trees)
      for (const TreeNode& tn : t.nodes)
        if (!tn.is_leaf()) table.thresholds[tn.feature].push_back(tn.threshold);
  }
  for (auto& ts : table.thresholds) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
  return table;
}

std::vector<Crossing> enumerate_crossings(const BoundaryTable& table, const PathQuery& q) {
  struct Hit {
    double alpha;
    int feature;
    double threshold;
  };
  std::vector<Hit> hits;
  const int n = static_cast<int>(q.s.size());
  for (int i = 0; i < n && i < static_cast<int>(table.thresholds.size()); ++i) {
    double si = q.s[i], ei = q.e[i];
    if (si == ei) continue;
    double lo = std::min(si, ei), hi = std::max(si, ei);
    const auto& ts = table.thresholds[i];
    auto first = std::upper_bound(ts.begin(), ts.end(), lo);
    for (auto it = first; it != ts.end() && *it < hi; ++it) {
      double alpha = (*it - si) / (ei - si);
      if (alpha > 0.0 && alpha < 1.0) hits.push_back({alpha, i, *it});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.feature < b.feature;
  });

  std::vector<Crossing> crossings;
  const double group_tol = 1e-12;
  size_t i = 0;
  while (i < hits.size()) {
    size_t j = i + 1;
    while (j < hits.size() && hits[j].alpha - hits[i].alpha <= group_tol) ++j;

    Crossing c;
    double alpha_sum = 0.0;
    for (size_t k = i; k < j; ++k) alpha_sum += hits[k].alpha;
    c.alpha = alpha_sum / static_cast<double>(j - i);

    for (size_t k = i; k < j; ++k) {
      const Hit& h = hits[k];
      auto pos = std::lower_bound(c.features.begin(), c.features.end(), h.feature);
      if (pos != c.features.end() && *pos == h.feature) {
        size_t idx = pos - c.features.begin();
        c.lo[idx] = std::min(c.lo[idx], h.threshold);
        c.hi[idx] = std::max(c.hi[idx], h.threshold);
      } else {
        size_t idx = pos - c.features.begin();
        c.features.insert(pos, h.feature);
        c.lo.insert(c.lo.begin() + idx, h.threshold);
        c.hi.insert(c.hi.begin() + idx, h.threshold);
      }
    }

    c.point.resize(n);
    for (int f = 0; f < n; ++f) c.point[f] = q.s[f] + c.alpha * (q.e[f] - q.s[f]);
    // snap matched coordinates onto their hyperplanes
    for (size_t k = 0; k < c.features.size(); ++k)
      c.point[c.features[k]] = 0.5 * (c.lo[k] + c.hi[k]);

    crossings.push_back(std::move(c));
    i = j;
  }
  return crossings;
}

std::vector<int> endpoint_radix(const BoundaryTable& table, const FeatureVector& x) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(x.size()) && i < static_cast<int>(table.thresholds.size());
       ++i) {
    const auto& ts = table.thresholds[i];
    // nearest threshold is adjacent to the insertion point
    auto it = std::lower_bound(ts.begin(), ts.end(), x[i]);
    bool on = (it != ts.end() && on_threshold(x[i], *it)) ||
              (it != ts.begin() && on_threshold(x[i], *(it - 1)));
    if (on) out.push_back(i);
  }
  return out;
}

// Distance from v to the nearest threshold of feature i, skipping
// thresholds v counts as lying on (their residual must stay below
// delta, not bound it).
static void push_nearest_gaps(const BoundaryTable& table, int feature, double v,
                              std::vector<double>& cands) {
  const auto& ts = table.thresholds[feature];
  auto it = std::lower_bound(ts.begin(), ts.end(), v);
  for (auto up = it; up != ts.end(); ++up) {
    if (!on_threshold(v, *up)) {
      cands.push_back(*up - v);
      break;
    }
  }
  for (auto down = it; down != ts.begin();) {
    --down;
    if (!on_threshold(v, *down)) {
      cands.push_back(v - *down);
      break;
    }
  }
}

double safe_step(const BoundaryTable& table, const std::vector<Crossing>& crossings,
                 const PathQuery& q) {
  std::vector<double> cands;

  for (const auto& ts : table.thresholds)
    for (size_t i = 1; i < ts.size(); ++i) cands.push_back(ts[i] - ts[i - 1]);

  const int n = static_cast<int>(q.s.size());
  for (const Crossing& c : crossings)
    for (int f = 0; f < n; ++f) push_nearest_gaps(table, f, c.point[f], cands);
  for (int f = 0; f < n; ++f) {
    push_nearest_gaps(table, f, q.s[f], cands);
    push_nearest_gaps(table, f, q.e[f], cands);
  }

  // alpha spacing mapped to coordinate scale
  if (!crossings.empty()) {
    double scale = 0.0;
    for (int f = 0; f < n; ++f) scale = std::max(scale, std::abs(q.e[f] - q.s[f]));
    double prev = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const Crossing& c : crossings) {
      double gap = c.alpha - prev;
      if (gap > 0.0) min_gap = std::min(min_gap, gap);
      prev = c.alpha;
    }
    if (1.0 - prev > 0.0) min_gap = std::min(min_gap, 1.0 - prev);
    if (std::isfinite(min_gap) && scale > 0.0) cands.push_back(min_gap * scale);
  }

  if (cands.empty()) return 1.0;
  return 0.5 * *std::min_element(cands.begin(), cands.end());
}

}  // namespace gig
