#include "gig/exact_eval.hpp"

namespace gig {

static Rational tree_eval_exact(const Tree& t, const FeatureVector& x) {
  int id = 0;
  while (!t.nodes[id].is_leaf()) {
    const TreeNode& n = t.nodes[id];
    id = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return rat_from_double(t.nodes[id].leaf_value);
}

static Rational curve_eval_exact(const PiecewiseLinearCurve& c, const Rational& v) {
  if (c.xs.empty()) return Rational(0);
  Rational first = rat_from_double(c.xs.front());
  Rational last = rat_from_double(c.xs.back());
  if (v <= first) return rat_from_double(c.ys.front());
  if (v >= last) return rat_from_double(c.ys.back());
  size_t lo = 0;
  for (size_t i = 1; i < c.xs.size(); ++i) {
    if (v < rat_from_double(c.xs[i])) {
      lo = i - 1;
      break;
    }
  }
  Rational x0 = rat_from_double(c.xs[lo]);
  Rational x1 = rat_from_double(c.xs[lo + 1]);
  Rational y0 = rat_from_double(c.ys[lo]);
  Rational y1 = rat_from_double(c.ys[lo + 1]);
  return y0 + (v - x0) * (y1 - y0) / (x1 - x0);
}

Rational eval_exact(const CompositionGraph& g, const FeatureVector& probe) {
  if (!g.exactly_evaluable())
    throw ModelError("eval_exact requires a piecewise-constant graph");
  check_feature_vector(probe, g.n_features);
  std::vector<Rational> values(g.nodes.size());
  for (int id : g.topo_order()) {
    const GraphNode& n = g.nodes[id];
    switch (n.kind) {
      case NodeKind::tree_ensemble: {
        Rational acc = rat_from_double(n.ensemble.base_score);
        for (const Tree& t : n.ensemble.trees) acc += tree_eval_exact(t, probe);
        values[id] = acc;
        break;
      }
      case NodeKind::pwl_curve:
        values[id] = curve_eval_exact(n.curve, values[n.inputs[0]]);
        break;
      case NodeKind::linear: {
        Rational acc = rat_from_double(n.bias);
        size_t w = 0;
        for (int up : n.inputs) acc += rat_from_double(n.weights[w++]) * values[up];
        values[id] = acc;
        break;
      }
      default:
        throw ModelError("eval_exact: unsupported node kind");
    }
  }
  return values[g.output_id];
}

}  // namespace gig
