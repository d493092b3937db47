#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gig/boundary.hpp"
#include "gig/model.hpp"

namespace gig {

struct QuadratureConfig {
  int nodes_per_panel = 16;  // Gauss-Legendre order
  int panels = 8;            // uniform split of each segment
  // adaptive bisection; unset = on exactly when the graph has curve nodes
  std::optional<bool> refine;
  double refine_tol = 1e-8;  // max componentwise change accepted per bisection
};

// Open interval of path parameter containing no crossing, with the
// cell assignment fixed for the whole segment (midpoint probe).
struct Segment {
  double lo = 0.0;
  double hi = 1.0;
  CellAssignment cells;
};

// Nodes/weights on [-1, 1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

bool resolve_refine(const CompositionGraph& g, const QuadratureConfig& cfg);

// Per-feature (e_i - s_i) * integral over [seg.lo, seg.hi] of the i-th
// partial of eval_split with the segment's cells, composite
// Gauss-Legendre with optional adaptive bisection. Constant axes
// (s_i = e_i) contribute exactly 0.
FeatureVector segment_ig(const CompositionGraph& g, const PathQuery& q, const Segment& seg,
                         const QuadratureConfig& cfg);

// The no-discontinuity case: segment_ig over the single segment [0, 1].
// Throws if the path crosses a boundary (use the engine there).
FeatureVector ig_full_path(const CompositionGraph& g, const PathQuery& q,
                           const QuadratureConfig& cfg);

}  // namespace gig
