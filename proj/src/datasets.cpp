#include "gig/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gig/rng.hpp"

namespace gig {

Dataset gen_moons(const GenSpec& spec) {
  if (spec.n_samples < 2) throw ModelError("gen_moons: need at least 2 samples");
  Rng rng(spec.seed);
  Dataset d;
  d.feature_names = {"x", "y"};
  const size_t n_outer = spec.n_samples - spec.n_samples / 2;
  const size_t n_inner = spec.n_samples / 2;

  auto angle = [](size_t i, size_t n) {
    return n < 2 ? 0.0 : M_PI * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (size_t i = 0; i < n_outer; ++i) {
    double t = angle(i, n_outer);
    d.rows.push_back({std::cos(t), std::sin(t)});
    d.labels.push_back(0);
  }
  for (size_t i = 0; i < n_inner; ++i) {
    double t = angle(i, n_inner);
    d.rows.push_back({1.0 - std::cos(t), 1.0 - std::sin(t) - 0.5});
    d.labels.push_back(1);
  }
  if (spec.noise > 0.0)
    for (auto& row : d.rows) {
      row[0] += rng.normal(0.0, spec.noise);
      row[1] += rng.normal(0.0, spec.noise);
    }
  // scale the whole set to unit max-norm
  double scale = 0.0;
  for (const auto& row : d.rows)
    scale = std::max({scale, std::abs(row[0]), std::abs(row[1])});
  if (scale > 0.0)
    for (auto& row : d.rows) {
      row[0] /= scale;
      row[1] /= scale;
    }
  return d;
}

namespace {

constexpr double kOvalSemiX = 2.0;
constexpr double kOvalSemiY = 1.0;
constexpr double kOvalOffset = 0.5;

bool inside_ellipse(double x, double y, double cy) {
  double dx = x / kOvalSemiX;
  double dy = (y - cy) / kOvalSemiY;
  return dx * dx + dy * dy <= 1.0;
}

}  // namespace

bool ovals_in_overlap(double x, double y) {
  return inside_ellipse(x, y, kOvalOffset) && inside_ellipse(x, y, -kOvalOffset);
}

Dataset gen_ovals(const GenSpec& spec) {
  if (spec.n_samples < 2) throw ModelError("gen_ovals: need at least 2 samples");
  Rng rng(spec.seed);
  Dataset d;
  d.feature_names = {"f0", "f1"};
  const size_t n_upper = spec.n_samples - spec.n_samples / 2;
  for (size_t i = 0; i < spec.n_samples; ++i) {
    bool upper = i < n_upper;
    // uniform inside an ellipse: radius sqrt(u), uniform angle
    double r = std::sqrt(rng.uniform01());
    double a = 2.0 * M_PI * rng.uniform01();
    double x = kOvalSemiX * r * std::cos(a);
    double y = kOvalSemiY * r * std::sin(a) + (upper ? kOvalOffset : -kOvalOffset);
    d.rows.push_back({x, y});
    d.labels.push_back(upper ? 1 : 0);
  }
  return d;
}

Dataset add_nuisance(const Dataset& data, double rho, uint64_t seed) {
  if (rho < 0.0 || rho > 1.0) throw ModelError("add_nuisance: rho must be in [0, 1]");
  Rng rng(seed);
  Dataset out = data;
  out.feature_names.push_back("nuisance");
  for (size_t i = 0; i < out.rows.size(); ++i)
    out.rows[i].push_back(rho * out.labels[i] + (1.0 - rho) * rng.normal());
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction > 1.0)
    throw ModelError("split_dataset: bad test fraction");
  Rng rng(seed);
  std::vector<size_t> idx(data.n_rows());
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);

  size_t n_test = static_cast<size_t>(std::llround(test_fraction * data.n_rows()));
  Dataset train, test;
  train.feature_names = test.feature_names = data.feature_names;
  for (size_t k = 0; k < idx.size(); ++k) {
    Dataset& dst = k < n_test ? test : train;
    dst.rows.push_back(data.rows[idx[k]]);
    dst.labels.push_back(data.labels[idx[k]]);
  }
  return {train, test};
}

FeatureVector feature_medians(const Dataset& data) {
  check_dataset(data);
  FeatureVector med(data.n_features());
  std::vector<double> col(data.n_rows());
  for (int f = 0; f < data.n_features(); ++f) {
    for (size_t r = 0; r < data.n_rows(); ++r) col[r] = data.rows[r][f];
    std::sort(col.begin(), col.end());
    size_t n = col.size();
    med[f] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return med;
}

double auc_score(const std::vector<int>& labels, const std::vector<double>& scores) {
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // rank sum with midranks for ties
  double pos_rank_sum = 0.0;
  size_t n_pos = 0, n_neg = 0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    double midrank = 0.5 * (i + j - 1) + 1.0;
    for (size_t k = i; k < j; ++k)
      if (labels[idx[k]] == 1) pos_rank_sum += midrank;
    i = j;
  }
  for (int l : labels) (l == 1 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) return 0.5;
  return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (static_cast<double>(n_pos) * n_neg);
}

}  // namespace gig
