#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gig/model.hpp"

namespace gig {

struct TrainParams {
  int n_trees = 25;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_leaf = 2;
  uint64_t seed = 0;  // kept for interface stability; training is deterministic
};

struct Dataset {
  std::vector<FeatureVector> rows;
  std::vector<int> labels;  // {0, 1}
  std::vector<std::string> feature_names;

  size_t n_rows() const { return rows.size(); }
  int n_features() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

void check_dataset(const Dataset& d);

struct TrainReport {
  std::vector<double> logloss;   // per completed round, training set
  std::vector<double> accuracy;  // per completed round, training set
};

struct GbmModel {
  TreeEnsemble ensemble;
  TrainReport report;
};

// Gradient boosting on logistic loss. Each round fits a regression
// tree to the residuals y - p with exact greedy variance-reduction
// splits at midpoints between consecutive distinct feature values;
// leaf values are damped Newton steps scaled by the learning rate.
// Deterministic for fixed (data, params).
GbmModel train_gbm(const Dataset& data, const TrainParams& params);

double predict_margin(const TreeEnsemble& ensemble, const FeatureVector& x);
double predict_proba(const TreeEnsemble& ensemble, const FeatureVector& x);

double sigmoid(double z);

}  // namespace gig
