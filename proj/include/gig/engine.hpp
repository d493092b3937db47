#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gig/boundary.hpp"
#include "gig/corner.hpp"
#include "gig/model.hpp"
#include "gig/quadrature.hpp"

namespace gig {

struct EngineConfig {
  QuadratureConfig quadrature;
  std::optional<double> delta_override;
  double efficiency_tol = 1e-5;
  int max_radix = kMaxRadix;
};

struct Attribution {
  FeatureVector total;       // zeta_sum + iota_start + iota_end + integral
  FeatureVector zeta_sum;
  FeatureVector iota_start;
  FeatureVector iota_end;
  FeatureVector integral;
  std::vector<std::pair<double, int>> crossings_used;  // (alpha, radix)
  double efficiency_residual = 0.0;  // sum(total) - (f(e) - f(s))
  double f_s = 0.0;
  double f_e = 0.0;
};

struct ExplainRequest {
  PathQuery query;
  EngineConfig config;
};

// Holds the boundary table and config for repeated queries against one
// immutable graph; safe for concurrent explain() calls.
class Explainer {
 public:
  Explainer(const CompositionGraph& graph, EngineConfig config);

  Attribution explain(const PathQuery& q) const;
  const BoundaryTable& boundaries() const { return table_; }
  const EngineConfig& config() const { return config_; }

 private:
  const CompositionGraph& graph_;
  EngineConfig config_;
  BoundaryTable table_;
};

Attribution explain(const CompositionGraph& graph, const ExplainRequest& req);

struct BatchItem {
  std::optional<Attribution> attribution;
  std::string error;  // empty on success
};

// Elementwise identical to sequential explain calls; order preserved.
// jobs > 1 distributes rows across threads.
std::vector<BatchItem> explain_batch(const CompositionGraph& graph,
                                     const std::vector<PathQuery>& queries,
                                     const EngineConfig& config, int jobs = 1);

// Empirical axiom checks for one (graph, path) pair.
struct AxiomReport {
  double efficiency_residual = 0.0;
  double reflexivity_dev = 0.0;
  double constant_var_dev = 0.0;   // max |credit| on axes with s_i = e_i
  double null_var_dev = 0.0;       // max |credit| on features the graph never reads
  std::optional<double> linearity_dev;
};

AxiomReport axiom_audit(const CompositionGraph& graph, const PathQuery& q,
                        const EngineConfig& config, const CompositionGraph* other = nullptr,
                        double alpha = 1.0, double beta = 1.0);

}  // namespace gig
