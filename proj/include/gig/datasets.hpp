#pragma once

#include <cstdint>
#include <utility>

#include "gig/gbm.hpp"

namespace gig {

struct GenSpec {
  size_t n_samples = 1000;
  double noise = 0.0;
  uint64_t seed = 0;
  double nuisance_mix = 0.0;  // rho: 0 pure noise .. 1 pure target
};

// Two interleaved half-circles (labels 0 outer / 1 inner), Gaussian
// noise on both coordinates, then the whole set scaled by its largest
// absolute coordinate. Pure function of (n_samples, noise, seed).
Dataset gen_moons(const GenSpec& spec);

// Uniform draws from two overlapping axis-aligned ellipses, both with
// semi-axes (2, 1), centered at (0, +0.5) (label 1) and (0, -0.5)
// (label 0). Points in the lens around y = 0 are ambiguous by
// construction.
Dataset gen_ovals(const GenSpec& spec);

bool ovals_in_overlap(double x, double y);

// Appends one feature: rho * label + (1 - rho) * standard normal.
Dataset add_nuisance(const Dataset& data, double rho, uint64_t seed);

// Deterministic shuffled split; first item holds (1 - test_fraction).
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          uint64_t seed);

FeatureVector feature_medians(const Dataset& data);

// Rank-based area under the ROC curve.
double auc_score(const std::vector<int>& labels, const std::vector<double>& scores);

}  // namespace gig
