#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gig {

using FeatureVector = std::vector<double>;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Activation { identity, relu, tanh, sigmoid };

Activation activation_from_string(const std::string& s);
const char* to_string(Activation a);

// -----------------------------------------------------------------
// leaf model types
// -----------------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double leaf_value = 0.0;
  int left = -1;
  int right = -1;
  bool is_leaf() const { return feature < 0; }
};

// Pool-backed binary tree, nodes[0] is the root.
// Routing rule: x[feature] < threshold goes left, x[feature] >= threshold
// goes right. Evaluation exactly on a threshold therefore takes the
// right branch.
struct Tree {
  std::vector<TreeNode> nodes;

  double eval(const FeatureVector& x) const;
  int depth() const;
};

struct TreeEnsemble {
  std::vector<Tree> trees;
  double base_score = 0.0;

  double eval(const FeatureVector& x) const;
};

struct DenseLayer {
  std::vector<std::vector<double>> weights;  // [out][in]
  std::vector<double> bias;                  // [out]
  Activation activation = Activation::identity;
};

struct DenseNetwork {
  std::vector<DenseLayer> layers;

  int input_dim() const;
  int output_dim() const;
};

// Monotone piecewise-linear map. Inputs strictly increasing, outputs
// non-decreasing. Outside the knot range the output clamps to the
// endpoint outputs; the derivative there is 0. At a knot the
// derivative is the right-hand slope.
struct PiecewiseLinearCurve {
  std::vector<double> xs;
  std::vector<double> ys;

  double eval(double v) const;
  double derivative(double v) const;
};

// -----------------------------------------------------------------
// composition graph
// -----------------------------------------------------------------

enum class NodeKind { input, tree_ensemble, dense, pwl_curve, linear };

const char* to_string(NodeKind k);

struct GraphNode {
  NodeKind kind = NodeKind::input;
  std::vector<int> inputs;    // upstream node ids (dense / pwl_curve / linear)
  std::vector<int> features;  // input: gathered raw feature indices
  TreeEnsemble ensemble;      // tree_ensemble
  DenseNetwork net;           // dense
  PiecewiseLinearCurve curve; // pwl_curve
  std::vector<double> weights;  // linear: one weight per upstream scalar
  double bias = 0.0;            // linear
};

// Selects the piecewise-constant branch: tree ensembles are evaluated
// at `probe` instead of the query point. The probe should sit strictly
// inside one grid cell; coordinates exactly on a threshold follow the
// tree routing rule (needed when a path runs inside a hyperplane).
struct CellAssignment {
  FeatureVector probe;
};

// Reusable buffers for graph evaluation.
struct EvalScratch {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> cots;
  std::vector<std::vector<std::vector<double>>> layer_acts;
};

// DAG of model nodes with a single scalar output. Immutable once
// finalize() has run; evaluation is const and safe to call from any
// number of threads (scratch state is per call).
class CompositionGraph {
 public:
  int n_features = 0;
  std::vector<GraphNode> nodes;
  int output_id = -1;

  // Computes topo order, widths and reachability flags. Throws
  // ModelError if validate() reports anything.
  void finalize();

  // Structural diagnostics; empty for a well-formed graph.
  std::vector<std::string> validate() const;

  double eval(const FeatureVector& x) const;
  double eval(const FeatureVector& x, EvalScratch& scratch) const;
  double eval_split(const FeatureVector& x, const CellAssignment& cells) const;
  double eval_split(const FeatureVector& x, const CellAssignment& cells,
                    EvalScratch& scratch) const;
  // d eval_split / d x with the discrete branch held fixed; tree nodes
  // contribute zero. ReLU kinks and curve knots use the right
  // derivative.
  FeatureVector gradient(const FeatureVector& x, const CellAssignment& cells) const;
  FeatureVector gradient(const FeatureVector& x, const CellAssignment& cells,
                         EvalScratch& scratch) const;

  bool finalized() const { return finalized_; }
  // True when some raw feature reaches the output without passing
  // through a tree, i.e. the gradient is not identically zero.
  bool continuous_dependence() const { return continuous_dependence_; }
  // True when every node is a tree ensemble, linear combiner or curve:
  // such graphs evaluate exactly in rational arithmetic.
  bool exactly_evaluable() const { return exactly_evaluable_; }
  bool has_curve_nodes() const { return has_curve_nodes_; }
  const std::vector<bool>& used_features() const { return used_features_; }
  const std::vector<int>& topo_order() const { return topo_; }
  int node_width(int id) const { return widths_[id]; }

 private:
  friend struct GraphEval;
  std::vector<int> topo_;
  std::vector<int> widths_;
  std::vector<bool> used_features_;
  bool continuous_dependence_ = false;
  bool exactly_evaluable_ = false;
  bool has_curve_nodes_ = false;
  bool finalized_ = false;
};

// -----------------------------------------------------------------
// builders
// -----------------------------------------------------------------

CompositionGraph single_ensemble_graph(TreeEnsemble ensemble, int n_features);
CompositionGraph linear_model_graph(std::vector<double> weights, double bias);

// alpha*f + beta*g as one graph; f and g must share n_features.
CompositionGraph lin_combine(const CompositionGraph& f, const CompositionGraph& g,
                             double alpha, double beta);

// Relabels raw features: old index i becomes pi[i].
CompositionGraph permute_features(const CompositionGraph& g, const std::vector<int>& pi);

void check_feature_vector(const FeatureVector& x, int n_features);

}  // namespace gig
