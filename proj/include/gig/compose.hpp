#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gig/model.hpp"

namespace gig {

// Declarative composition: submodels, an optional calibration curve per
// submodel, a combiner over the submodel scores, and an optional final
// curve on the combined score.
struct ComposeSubmodel {
  CompositionGraph graph;
  std::optional<PiecewiseLinearCurve> ecdf;
};

struct DenseCombiner {
  DenseNetwork net;
};
struct LinearCombiner {
  std::vector<double> weights;
  double bias = 0.0;
};

struct ComposePlan {
  std::vector<ComposeSubmodel> submodels;
  std::optional<LinearCombiner> linear;  // exactly one combiner set
  std::optional<DenseCombiner> dense;
  std::optional<PiecewiseLinearCurve> final_ecdf;
};

CompositionGraph build_composed_graph(const ComposePlan& plan);

// Parses a compose spec document; file references are resolved through
// the loader callbacks so tests can feed in-memory models.
ComposePlan compose_plan_from_json(
    const nlohmann::json& spec,
    const std::function<CompositionGraph(const std::string&)>& load_model,
    const std::function<PiecewiseLinearCurve(const std::string&)>& load_curve);

}  // namespace gig
