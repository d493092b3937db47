#include "gig/compose.hpp"

#include "gig/model_json.hpp"

namespace gig {

namespace {

int append_subgraph(CompositionGraph& dst, const CompositionGraph& src) {
  int offset = static_cast<int>(dst.nodes.size());
  for (const GraphNode& n : src.nodes) {
    GraphNode copy = n;
    for (int& up : copy.inputs) up += offset;
    dst.nodes.push_back(std::move(copy));
  }
  return offset + src.output_id;
}

}  // namespace

CompositionGraph build_composed_graph(const ComposePlan& plan) {
  if (plan.submodels.empty()) throw ModelError("compose: no submodels");
  if (plan.linear.has_value() == plan.dense.has_value())
    throw ModelError("compose: exactly one combiner required");

  CompositionGraph out;
  out.n_features = plan.submodels.front().graph.n_features;
  std::vector<int> score_ids;
  for (const auto& sub : plan.submodels) {
    if (sub.graph.n_features != out.n_features)
      throw ModelError("compose: submodels disagree on feature count");
    int id = append_subgraph(out, sub.graph);
    if (sub.ecdf) {
      GraphNode curve;
      curve.kind = NodeKind::pwl_curve;
      curve.inputs = {id};
      curve.curve = *sub.ecdf;
      out.nodes.push_back(std::move(curve));
      id = static_cast<int>(out.nodes.size()) - 1;
    }
    score_ids.push_back(id);
  }

  int combined;
  if (plan.linear) {
    if (plan.linear->weights.size() != score_ids.size())
      throw ModelError("compose: combiner has " + std::to_string(plan.linear->weights.size()) +
                       " weights for " + std::to_string(score_ids.size()) + " submodels");
    GraphNode comb;
    comb.kind = NodeKind::linear;
    comb.inputs = score_ids;
    comb.weights = plan.linear->weights;
    comb.bias = plan.linear->bias;
    out.nodes.push_back(std::move(comb));
    combined = static_cast<int>(out.nodes.size()) - 1;
  } else {
    if (plan.dense->net.input_dim() != static_cast<int>(score_ids.size()))
      throw ModelError("compose: dense combiner expects " +
                       std::to_string(plan.dense->net.input_dim()) + " inputs, got " +
                       std::to_string(score_ids.size()));
    if (plan.dense->net.output_dim() != 1)
      throw ModelError("compose: dense combiner must end in a scalar");
    GraphNode comb;
    comb.kind = NodeKind::dense;
    comb.inputs = score_ids;
    comb.net = plan.dense->net;
    out.nodes.push_back(std::move(comb));
    combined = static_cast<int>(out.nodes.size()) - 1;
  }

  if (plan.final_ecdf) {
    GraphNode curve;
    curve.kind = NodeKind::pwl_curve;
    curve.inputs = {combined};
    curve.curve = *plan.final_ecdf;
    out.nodes.push_back(std::move(curve));
    combined = static_cast<int>(out.nodes.size()) - 1;
  }
  out.output_id = combined;
  out.finalize();
  return out;
}

ComposePlan compose_plan_from_json(
    const nlohmann::json& spec,
    const std::function<CompositionGraph(const std::string&)>& load_model,
    const std::function<PiecewiseLinearCurve(const std::string&)>& load_curve) {
  try {
    ComposePlan plan;
    for (const auto& js : spec.at("submodels")) {
      ComposeSubmodel sub;
      sub.graph = load_model(js.at("model").get<std::string>());
      if (js.contains("ecdf") && !js.at("ecdf").is_null())
        sub.ecdf = load_curve(js.at("ecdf").get<std::string>());
      plan.submodels.push_back(std::move(sub));
    }
    const auto& jc = spec.at("combiner");
    std::string kind = jc.at("kind").get<std::string>();
    if (kind == "linear") {
      LinearCombiner lc;
      lc.weights = jc.at("weights").get<std::vector<double>>();
      lc.bias = jc.value("bias", 0.0);
      plan.linear = std::move(lc);
    } else if (kind == "dense") {
      DenseCombiner dc;
      for (const auto& jl : jc.at("layers")) {
        DenseLayer l;
        l.weights = jl.at("weights").get<std::vector<std::vector<double>>>();
        l.bias = jl.at("bias").get<std::vector<double>>();
        l.activation = activation_from_string(jl.at("activation").get<std::string>());
        dc.net.layers.push_back(std::move(l));
      }
      plan.dense = std::move(dc);
    } else {
      throw SchemaError("compose: unknown combiner kind " + kind);
    }
    if (spec.contains("final_ecdf") && !spec.at("final_ecdf").is_null())
      plan.final_ecdf = load_curve(spec.at("final_ecdf").get<std::string>());
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed compose spec: ") + e.what());
  }
}

}  // namespace gig
