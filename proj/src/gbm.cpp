#include "gig/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gig {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_dataset(const Dataset& d) {
  if (d.rows.empty()) throw ModelError("dataset is empty");
  if (d.labels.size() != d.rows.size()) throw ModelError("row/label count mismatch");
  size_t width = d.rows[0].size();
  if (width == 0) throw ModelError("dataset has no features");
  for (const auto& r : d.rows) {
    if (r.size() != width) throw ModelError("ragged dataset rows");
    for (double v : r)
      if (!std::isfinite(v)) throw ModelError("dataset contains a non-finite value");
  }
  for (int l : d.labels)
    if (l != 0 && l != 1) throw ModelError("labels must be 0 or 1");
}

namespace {

struct TreeBuilder {
  const Dataset& data;
  const TrainParams& params;
  const std::vector<double>& residual;  // y - p
  const std::vector<double>& hess;      // p (1 - p)
  // per feature, row indices sorted by that feature's value; partitioned
  // in place as the tree grows
  std::vector<std::vector<int>> order;
  Tree tree;

  // best variance-reduction split of [lo, hi); feature -1 means none
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    int n_left = 0;
  };

  Split find_split(int lo, int hi) {
    Split best;
    const int count = hi - lo;
    double total = 0.0;
    for (int k = lo; k < hi; ++k) total += residual[order[0][k]];
    const double parent_score = total * total / count;

    for (int f = 0; f < data.n_features(); ++f) {
      const auto& idx = order[f];
      double left_sum = 0.0;
      for (int k = lo; k + 1 < hi; ++k) {
        int row = idx[k];
        left_sum += residual[row];
        double v = data.rows[row][f];
        double next = data.rows[idx[k + 1]][f];
        if (v == next) continue;
        int n_left = k - lo + 1;
        int n_right = count - n_left;
        if (n_left < params.min_leaf || n_right < params.min_leaf) continue;
        double thr = 0.5 * (v + next);
        if (!(v < thr && thr < next)) continue;  // adjacent representables
        double right_sum = total - left_sum;
        double gain =
            left_sum * left_sum / n_left + right_sum * right_sum / n_right - parent_score;
        if (gain > best.gain + 1e-12) {
          best.feature = f;
          best.threshold = thr;
          best.gain = gain;
          best.n_left = n_left;
        }
      }
    }
    return best;
  }

  void partition(int lo, int hi, int feature, double threshold) {
    std::vector<int> buf;
    buf.reserve(hi - lo);
    for (auto& idx : order) {
      buf.clear();
      int write = lo;
      for (int k = lo; k < hi; ++k) {
        int row = idx[k];
        if (data.rows[row][feature] < threshold)
          idx[write++] = row;
        else
          buf.push_back(row);
      }
      std::copy(buf.begin(), buf.end(), idx.begin() + write);
    }
  }

  int build(int lo, int hi, int depth) {
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    Split split;
    if (depth < params.max_depth && hi - lo >= 2 * params.min_leaf) split = find_split(lo, hi);

    if (split.feature < 0) {
      double g = 0.0, h = 0.0;
      for (int k = lo; k < hi; ++k) {
        g += residual[order[0][k]];
        h += hess[order[0][k]];
      }
      tree.nodes[id].feature = -1;
      tree.nodes[id].leaf_value = params.learning_rate * g / (h + 1.0);
      return id;
    }

    partition(lo, hi, split.feature, split.threshold);
    tree.nodes[id].feature = split.feature;
    tree.nodes[id].threshold = split.threshold;
    int left = build(lo, lo + split.n_left, depth + 1);
    int right = build(lo + split.n_left, hi, depth + 1);
    tree.nodes[id].left = left;
    tree.nodes[id].right = right;
    return id;
  }
};

}  // namespace

GbmModel train_gbm(const Dataset& data, const TrainParams& params) {
  check_dataset(data);
  if (params.n_trees < 1 || params.max_depth < 1) throw ModelError("bad training params");
  if (params.learning_rate <= 0.0 || params.learning_rate > 1.0)
    throw ModelError("learning rate must be in (0, 1]");
  const size_t n = data.n_rows();
  if (static_cast<int>(n) < 2 * params.min_leaf) throw ModelError("too few rows to train");

  double label_sum = std::accumulate(data.labels.begin(), data.labels.end(), 0.0);
  if (label_sum == 0.0 || label_sum == static_cast<double>(n))
    throw ModelError("training data contains a single class");
  double p_mean = label_sum / n;

  GbmModel model;
  model.ensemble.base_score = std::log(p_mean / (1.0 - p_mean));

  // presorted row order per feature, copied into each tree builder
  std::vector<std::vector<int>> base_order(data.n_features());
  for (int f = 0; f < data.n_features(); ++f) {
    auto& idx = base_order[f];
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return data.rows[a][f] < data.rows[b][f]; });
  }

  std::vector<double> margin(n, model.ensemble.base_score);
  std::vector<double> residual(n), hess(n);

  for (int round = 0; round < params.n_trees; ++round) {
    for (size_t r = 0; r < n; ++r) {
      double p = sigmoid(margin[r]);
      residual[r] = data.labels[r] - p;
      hess[r] = p * (1.0 - p);
    }

    TreeBuilder builder{data, params, residual, hess, base_order, {}};
    builder.build(0, static_cast<int>(n), 0);
    for (size_t r = 0; r < n; ++r) margin[r] += builder.tree.eval(data.rows[r]);
    model.ensemble.trees.push_back(std::move(builder.tree));

    double loss = 0.0;
    size_t correct = 0;
    for (size_t r = 0; r < n; ++r) {
      double p = sigmoid(margin[r]);
      p = std::min(1.0 - 1e-12, std::max(1e-12, p));
      loss -= data.labels[r] ? std::log(p) : std::log(1.0 - p);
      correct += (p >= 0.5) == (data.labels[r] == 1);
    }
    model.report.logloss.push_back(loss / n);
    model.report.accuracy.push_back(static_cast<double>(correct) / n);
  }
  return model;
}

double predict_margin(const TreeEnsemble& ensemble, const FeatureVector& x) {
  return ensemble.eval(x);
}

double predict_proba(const TreeEnsemble& ensemble, const FeatureVector& x) {
  return sigmoid(ensemble.eval(x));
}

}  // namespace gig
