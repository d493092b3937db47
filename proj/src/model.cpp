#include "gig/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gig {

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  throw ModelError("unknown activation: " + s);
}

const char* to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "identity";
}

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::input: return "input";
    case NodeKind::tree_ensemble: return "tree_ensemble";
    case NodeKind::dense: return "dense";
    case NodeKind::pwl_curve: return "pwl_curve";
    case NodeKind::linear: return "linear";
  }
  return "input";
}

void check_feature_vector(const FeatureVector& x, int n_features) {
  if (static_cast<int>(x.size()) != n_features)
    throw ModelError("feature vector has length " + std::to_string(x.size()) +
                     ", graph expects " + std::to_string(n_features));
  for (double v : x)
    if (!std::isfinite(v)) throw ModelError("feature vector contains a non-finite value");
}

// -----------------------------------------------------------------
// trees
// -----------------------------------------------------------------

double Tree::eval(const FeatureVector& x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return nodes[id].leaf_value;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<int, int>> stack{{0, 1}};
  int best = 0;
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[id].is_leaf()) {
      stack.push_back({nodes[id].left, d + 1});
      stack.push_back({nodes[id].right, d + 1});
    }
  }
  return best;
}

double TreeEnsemble::eval(const FeatureVector& x) const {
  double acc = base_score;
  for (const Tree& t : trees) acc += t.eval(x);
  return acc;
}

// -----------------------------------------------------------------
// dense network
// -----------------------------------------------------------------

int DenseNetwork::input_dim() const {
  if (layers.empty()) return 0;
  return layers.front().weights.empty() ? 0
                                        : static_cast<int>(layers.front().weights[0].size());
}

int DenseNetwork::output_dim() const {
  if (layers.empty()) return 0;
  return static_cast<int>(layers.back().weights.size());
}

static double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

// derivative w.r.t. the pre-activation z; right derivative at the ReLU kink
static double activation_grad(Activation a, double z, double out) {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::relu: return z >= 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - out * out;
    case Activation::sigmoid: return out * (1.0 - out);
  }
  return 1.0;
}

// -----------------------------------------------------------------
// piecewise-linear curve
// -----------------------------------------------------------------

double PiecewiseLinearCurve::eval(double v) const {
  if (xs.empty()) return 0.0;
  if (v <= xs.front()) return ys.front();
  if (v >= xs.back()) return ys.back();
  size_t hi = std::upper_bound(xs.begin(), xs.end(), v) - xs.begin();
  size_t lo = hi - 1;
  double t = (v - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

double PiecewiseLinearCurve::derivative(double v) const {
  if (xs.size() < 2) return 0.0;
  if (v < xs.front() || v >= xs.back()) return 0.0;
  size_t hi = std::upper_bound(xs.begin(), xs.end(), v) - xs.begin();
  size_t lo = hi - 1;
  return (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]);
}

// -----------------------------------------------------------------
// graph
// -----------------------------------------------------------------

static int node_output_width(const CompositionGraph& g, const GraphNode& n,
                             const std::vector<int>& widths) {
  switch (n.kind) {
    case NodeKind::input: return static_cast<int>(n.features.size());
    case NodeKind::tree_ensemble: return 1;
    case NodeKind::dense: return n.net.output_dim();
    case NodeKind::pwl_curve: return 1;
    case NodeKind::linear: return 1;
  }
  (void)g;
  (void)widths;
  return 0;
}

std::vector<std::string> CompositionGraph::validate() const {
  std::vector<std::string> diags;
  auto diag = [&](const std::string& m) { diags.push_back(m); };

  const int n_nodes = static_cast<int>(nodes.size());
  if (n_features <= 0) diag("graph declares no input features");
  if (output_id < 0 || output_id >= n_nodes) {
    diag("output_id out of range");
    return diags;
  }

  for (int id = 0; id < n_nodes; ++id) {
    const GraphNode& n = nodes[id];
    std::string where = "node " + std::to_string(id) + " (" + to_string(n.kind) + "): ";
    for (int up : n.inputs)
      if (up < 0 || up >= n_nodes) diag(where + "input id out of range");

    switch (n.kind) {
      case NodeKind::input:
        if (!n.inputs.empty()) diag(where + "input node cannot have upstream nodes");
        if (n.features.empty()) diag(where + "input node gathers no features");
        for (int f : n.features)
          if (f < 0 || f >= n_features) diag(where + "feature index out of range");
        break;
      case NodeKind::tree_ensemble: {
        if (!n.inputs.empty()) diag(where + "tree must read raw inputs");
        for (const Tree& t : n.ensemble.trees) {
          if (t.nodes.empty()) {
            diag(where + "empty tree");
            continue;
          }
          for (const TreeNode& tn : t.nodes) {
            if (tn.is_leaf()) continue;
            if (tn.feature >= n_features) diag(where + "tree splits on feature out of range");
            if (tn.left < 0 || tn.left >= static_cast<int>(t.nodes.size()) || tn.right < 0 ||
                tn.right >= static_cast<int>(t.nodes.size()))
              diag(where + "tree child id out of range");
            if (!std::isfinite(tn.threshold)) diag(where + "non-finite threshold");
          }
        }
        break;
      }
      case NodeKind::dense: {
        if (n.inputs.size() != 1) diag(where + "dense node needs exactly one input");
        if (n.net.layers.empty()) diag(where + "dense node has no layers");
        int prev = n.net.input_dim();
        for (const DenseLayer& l : n.net.layers) {
          if (l.weights.empty()) {
            diag(where + "empty layer");
            continue;
          }
          for (const auto& row : l.weights)
            if (static_cast<int>(row.size()) != prev) diag(where + "layer dimensions do not chain");
          if (l.bias.size() != l.weights.size()) diag(where + "bias length mismatch");
          prev = static_cast<int>(l.weights.size());
        }
        break;
      }
      case NodeKind::pwl_curve: {
        if (n.inputs.size() != 1) diag(where + "curve needs exactly one input");
        const auto& c = n.curve;
        if (c.xs.size() != c.ys.size() || c.xs.empty()) diag(where + "malformed knot list");
        for (size_t i = 1; i < c.xs.size(); ++i) {
          if (!(c.xs[i] > c.xs[i - 1])) diag(where + "knot inputs not strictly increasing");
          if (c.ys[i] < c.ys[i - 1]) diag(where + "non-monotone curve");
        }
        break;
      }
      case NodeKind::linear:
        if (n.inputs.empty()) diag(where + "combiner has no inputs");
        break;
    }
  }
  if (!diags.empty()) return diags;

  // cycle check + width chaining over the full node set
  std::vector<int> state(n_nodes, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<int> widths(n_nodes, 0);
  bool cyclic = false;
  std::vector<std::pair<int, size_t>> stack;
  for (int root = 0; root < n_nodes && !cyclic; ++root) {
    if (state[root] != 0) continue;
    stack.push_back({root, 0});
    state[root] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      if (next < nodes[id].inputs.size()) {
        int up = nodes[id].inputs[next++];
        if (state[up] == 1) {
          cyclic = true;
          break;
        }
        if (state[up] == 0) {
          state[up] = 1;
          stack.push_back({up, 0});
        }
      } else {
        state[id] = 2;
        widths[id] = node_output_width(*this, nodes[id], widths);
        stack.pop_back();
      }
    }
    stack.clear();
  }
  if (cyclic) {
    diag("graph contains a cycle");
    return diags;
  }

  for (int id = 0; id < n_nodes; ++id) {
    const GraphNode& n = nodes[id];
    std::string where = "node " + std::to_string(id) + " (" + to_string(n.kind) + "): ";
    int in_width = 0;
    for (int up : n.inputs) in_width += widths[up];
    if (n.kind == NodeKind::dense && in_width != n.net.input_dim())
      diag(where + "input width " + std::to_string(in_width) + " != layer width " +
           std::to_string(n.net.input_dim()));
    if (n.kind == NodeKind::pwl_curve && in_width != 1) diag(where + "curve input must be scalar");
    if (n.kind == NodeKind::linear && static_cast<int>(n.weights.size()) != in_width)
      diag(where + "combiner has " + std::to_string(n.weights.size()) + " weights for width " +
           std::to_string(in_width));
  }
  if (widths[output_id] != 1) diag("output node is not scalar");
  return diags;
}

void CompositionGraph::finalize() {
  auto diags = validate();
  if (!diags.empty()) {
    std::string msg = "invalid graph:";
    for (const auto& d : diags) msg += "\n  " + d;
    throw ModelError(msg);
  }

  const int n_nodes = static_cast<int>(nodes.size());
  topo_.clear();
  widths_.assign(n_nodes, 0);

  // topo order restricted to nodes reachable from the output
  std::vector<int> state(n_nodes, 0);
  std::vector<std::pair<int, size_t>> stack{{output_id, 0}};
  state[output_id] = 1;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    if (next < nodes[id].inputs.size()) {
      int up = nodes[id].inputs[next++];
      if (state[up] == 0) {
        state[up] = 1;
        stack.push_back({up, 0});
      }
    } else {
      state[id] = 2;
      topo_.push_back(id);
      stack.pop_back();
    }
  }
  for (int id : topo_) widths_[id] = node_output_width(*this, nodes[id], widths_);

  used_features_.assign(n_features, false);
  std::vector<bool> cont(n_nodes, false);
  continuous_dependence_ = false;
  exactly_evaluable_ = true;
  has_curve_nodes_ = false;
  for (int id : topo_) {
    const GraphNode& n = nodes[id];
    switch (n.kind) {
      case NodeKind::input:
        for (int f : n.features) used_features_[f] = true;
        cont[id] = true;
        exactly_evaluable_ = false;
        break;
      case NodeKind::tree_ensemble:
        for (const Tree& t : n.ensemble.trees)
          for (const TreeNode& tn : t.nodes)
            if (!tn.is_leaf()) used_features_[tn.feature] = true;
        cont[id] = false;
        break;
      case NodeKind::dense:
        exactly_evaluable_ = false;
        cont[id] = cont[n.inputs[0]];
        break;
      case NodeKind::pwl_curve:
        has_curve_nodes_ = true;
        cont[id] = cont[n.inputs[0]];
        break;
      case NodeKind::linear:
        for (int up : n.inputs) cont[id] = cont[id] || cont[up];
        break;
    }
  }
  continuous_dependence_ = cont[output_id];
  finalized_ = true;
}

// -----------------------------------------------------------------
// evaluation
// -----------------------------------------------------------------

struct GraphEval {
  const CompositionGraph& g;
  const FeatureVector& x;
  const FeatureVector* probe;  // tree evaluation point; nullptr = x
  EvalScratch& s;

  void forward() {
    const auto& nodes = g.nodes;
    if (s.values.size() != nodes.size()) {
      s.values.assign(nodes.size(), {});
      s.layer_acts.assign(nodes.size(), {});
    }
    for (int id : g.topo_) {
      const GraphNode& n = nodes[id];
      auto& out = s.values[id];
      out.resize(g.widths_[id]);
      switch (n.kind) {
        case NodeKind::input:
          for (size_t k = 0; k < n.features.size(); ++k) out[k] = x[n.features[k]];
          break;
        case NodeKind::tree_ensemble:
          out[0] = n.ensemble.eval(probe ? *probe : x);
          break;
        case NodeKind::dense: {
          auto& acts = s.layer_acts[id];
          acts.resize(n.net.layers.size() + 1);
          acts[0] = s.values[n.inputs[0]];
          for (size_t li = 0; li < n.net.layers.size(); ++li) {
            const DenseLayer& l = n.net.layers[li];
            auto& a = acts[li + 1];
            a.resize(l.weights.size());
            for (size_t r = 0; r < l.weights.size(); ++r) {
              double z = l.bias[r];
              const auto& row = l.weights[r];
              for (size_t c = 0; c < row.size(); ++c) z += row[c] * acts[li][c];
              a[r] = apply_activation(l.activation, z);
            }
          }
          out = acts.back();
          break;
        }
        case NodeKind::pwl_curve:
          out[0] = n.curve.eval(s.values[n.inputs[0]][0]);
          break;
        case NodeKind::linear: {
          double acc = n.bias;
          size_t w = 0;
          for (int up : n.inputs)
            for (double v : s.values[up]) acc += n.weights[w++] * v;
          out[0] = acc;
          break;
        }
      }
      for (double v : out)
        if (!std::isfinite(v))
          throw ModelError("non-finite intermediate value at node " + std::to_string(id));
    }
  }

  // reverse sweep; result indexed by raw feature
  FeatureVector backward() {
    const auto& nodes = g.nodes;
    if (s.cots.size() != nodes.size()) s.cots.assign(nodes.size(), {});
    for (int id : g.topo_) {
      s.cots[id].assign(g.widths_[id], 0.0);
    }
    FeatureVector grad(g.n_features, 0.0);
    s.cots[g.output_id][0] = 1.0;
    for (auto it = g.topo_.rbegin(); it != g.topo_.rend(); ++it) {
      int id = *it;
      const GraphNode& n = nodes[id];
      const auto& cot = s.cots[id];
      switch (n.kind) {
        case NodeKind::input:
          for (size_t k = 0; k < n.features.size(); ++k) grad[n.features[k]] += cot[k];
          break;
        case NodeKind::tree_ensemble:
          break;  // constant in x
        case NodeKind::dense: {
          const auto& acts = s.layer_acts[id];
          std::vector<double> d = cot;
          for (size_t li = n.net.layers.size(); li-- > 0;) {
            const DenseLayer& l = n.net.layers[li];
            // fold the activation derivative into d
            for (size_t r = 0; r < d.size(); ++r) {
              double out_v = acts[li + 1][r];
              // recompute z only for relu, where the kink side matters
              if (l.activation == Activation::relu) {
                double z = l.bias[r];
                const auto& row = l.weights[r];
                for (size_t c = 0; c < row.size(); ++c) z += row[c] * acts[li][c];
                d[r] *= activation_grad(l.activation, z, out_v);
              } else {
                d[r] *= activation_grad(l.activation, 0.0, out_v);
              }
            }
            std::vector<double> prev(l.weights[0].size(), 0.0);
            for (size_t r = 0; r < l.weights.size(); ++r)
              for (size_t c = 0; c < prev.size(); ++c) prev[c] += l.weights[r][c] * d[r];
            d = std::move(prev);
          }
          auto& up = s.cots[n.inputs[0]];
          for (size_t k = 0; k < up.size(); ++k) up[k] += d[k];
          break;
        }
        case NodeKind::pwl_curve: {
          double v = s.values[n.inputs[0]][0];
          s.cots[n.inputs[0]][0] += cot[0] * n.curve.derivative(v);
          break;
        }
        case NodeKind::linear: {
          size_t w = 0;
          for (int up : n.inputs)
            for (size_t k = 0; k < s.cots[up].size(); ++k) s.cots[up][k] += n.weights[w++] * cot[0];
          break;
        }
      }
    }
    return grad;
  }
};

static void require_finalized(const CompositionGraph& g) {
  if (!g.finalized()) throw ModelError("graph not finalized");
}

double CompositionGraph::eval(const FeatureVector& x) const {
  EvalScratch scratch;
  return eval(x, scratch);
}

double CompositionGraph::eval(const FeatureVector& x, EvalScratch& scratch) const {
  require_finalized(*this);
  check_feature_vector(x, n_features);
  GraphEval ev{*this, x, nullptr, scratch};
  ev.forward();
  return scratch.values[output_id][0];
}

double CompositionGraph::eval_split(const FeatureVector& x, const CellAssignment& cells) const {
  EvalScratch scratch;
  return eval_split(x, cells, scratch);
}

double CompositionGraph::eval_split(const FeatureVector& x, const CellAssignment& cells,
                                    EvalScratch& scratch) const {
  require_finalized(*this);
  check_feature_vector(x, n_features);
  check_feature_vector(cells.probe, n_features);
  GraphEval ev{*this, x, &cells.probe, scratch};
  ev.forward();
  return scratch.values[output_id][0];
}

FeatureVector CompositionGraph::gradient(const FeatureVector& x,
                                         const CellAssignment& cells) const {
  EvalScratch scratch;
  return gradient(x, cells, scratch);
}

FeatureVector CompositionGraph::gradient(const FeatureVector& x, const CellAssignment& cells,
                                         EvalScratch& scratch) const {
  require_finalized(*this);
  check_feature_vector(x, n_features);
  check_feature_vector(cells.probe, n_features);
  GraphEval ev{*this, x, &cells.probe, scratch};
  ev.forward();
  return ev.backward();
}

// -----------------------------------------------------------------
// builders
// -----------------------------------------------------------------

CompositionGraph single_ensemble_graph(TreeEnsemble ensemble, int n_features) {
  CompositionGraph g;
  g.n_features = n_features;
  GraphNode n;
  n.kind = NodeKind::tree_ensemble;
  n.ensemble = std::move(ensemble);
  g.nodes.push_back(std::move(n));
  g.output_id = 0;
  g.finalize();
  return g;
}

CompositionGraph linear_model_graph(std::vector<double> weights, double bias) {
  CompositionGraph g;
  g.n_features = static_cast<int>(weights.size());
  GraphNode in;
  in.kind = NodeKind::input;
  in.features.resize(weights.size());
  std::iota(in.features.begin(), in.features.end(), 0);
  g.nodes.push_back(std::move(in));
  GraphNode lin;
  lin.kind = NodeKind::linear;
  lin.inputs = {0};
  lin.weights = std::move(weights);
  lin.bias = bias;
  g.nodes.push_back(std::move(lin));
  g.output_id = 1;
  g.finalize();
  return g;
}

static int append_nodes(CompositionGraph& dst, const CompositionGraph& src) {
  int offset = static_cast<int>(dst.nodes.size());
  for (const GraphNode& n : src.nodes) {
    GraphNode copy = n;
    for (int& up : copy.inputs) up += offset;
    dst.nodes.push_back(std::move(copy));
  }
  return offset + src.output_id;
}

CompositionGraph lin_combine(const CompositionGraph& f, const CompositionGraph& g, double alpha,
                             double beta) {
  if (f.n_features != g.n_features) throw ModelError("lin_combine: arity mismatch");
  CompositionGraph out;
  out.n_features = f.n_features;
  int f_out = append_nodes(out, f);
  int g_out = append_nodes(out, g);
  GraphNode comb;
  comb.kind = NodeKind::linear;
  comb.inputs = {f_out, g_out};
  comb.weights = {alpha, beta};
  comb.bias = 0.0;
  out.nodes.push_back(std::move(comb));
  out.output_id = static_cast<int>(out.nodes.size()) - 1;
  out.finalize();
  return out;
}

CompositionGraph permute_features(const CompositionGraph& g, const std::vector<int>& pi) {
  if (static_cast<int>(pi.size()) != g.n_features)
    throw ModelError("permute_features: permutation length mismatch");
  CompositionGraph out = g;
  for (GraphNode& n : out.nodes) {
    if (n.kind == NodeKind::input)
      for (int& f : n.features) f = pi[f];
    if (n.kind == NodeKind::tree_ensemble)
      for (Tree& t : n.ensemble.trees)
        for (TreeNode& tn : t.nodes)
          if (!tn.is_leaf()) tn.feature = pi[tn.feature];
  }
  out.finalize();
  return out;
}

}  // namespace gig
