#include "gig/model_json.hpp"

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace gig {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

// ---------------- trees ----------------

static json tree_node_to_json(const Tree& t, int id) {
  const TreeNode& n = t.nodes[id];
  if (n.is_leaf()) return json{{"leaf", n.leaf_value}};
  return json{{"split", {{"feature", n.feature}, {"threshold", n.threshold}}},
              {"left", tree_node_to_json(t, n.left)},
              {"right", tree_node_to_json(t, n.right)}};
}

static int tree_node_from_json(const json& j, Tree& t) {
  int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    t.nodes[id].feature = -1;
    t.nodes[id].leaf_value = j.at("leaf").get<double>();
    return id;
  }
  const json& s = j.at("split");
  t.nodes[id].feature = s.at("feature").get<int>();
  t.nodes[id].threshold = s.at("threshold").get<double>();
  int left = tree_node_from_json(j.at("left"), t);
  int right = tree_node_from_json(j.at("right"), t);
  t.nodes[id].left = left;
  t.nodes[id].right = right;
  return id;
}

// ---------------- curves ----------------

json curve_to_json(const PiecewiseLinearCurve& c) {
  json knots = json::array();
  for (size_t i = 0; i < c.xs.size(); ++i) knots.push_back(json::array({c.xs[i], c.ys[i]}));
  return json{{"version", 1}, {"kind", "pwl_curve"}, {"knots", knots}};
}

PiecewiseLinearCurve curve_from_json(const json& j) {
  if (j.value("kind", "") != std::string("pwl_curve")) throw SchemaError("not a pwl_curve document");
  PiecewiseLinearCurve c;
  for (const auto& k : j.at("knots")) {
    if (!k.is_array() || k.size() != 2) throw SchemaError("knot must be [input, output]");
    c.xs.push_back(k[0].get<double>());
    c.ys.push_back(k[1].get<double>());
  }
  return c;
}

void write_curve_file(const PiecewiseLinearCurve& c, const std::string& path) {
  write_text_file(path, curve_to_json(c).dump(2) + "\n");
}

PiecewiseLinearCurve read_curve_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return curve_from_json(j);
}

// ---------------- graphs ----------------

json model_to_json(const CompositionGraph& g) {
  json nodes = json::array();
  for (size_t id = 0; id < g.nodes.size(); ++id) {
    const GraphNode& n = g.nodes[id];
    json jn{{"id", id}, {"kind", to_string(n.kind)}};
    switch (n.kind) {
      case NodeKind::input:
        jn["features"] = n.features;
        break;
      case NodeKind::tree_ensemble: {
        jn["base_score"] = n.ensemble.base_score;
        json trees = json::array();
        for (const Tree& t : n.ensemble.trees) trees.push_back(tree_node_to_json(t, 0));
        jn["trees"] = trees;
        break;
      }
      case NodeKind::dense: {
        jn["input"] = n.inputs[0];
        json layers = json::array();
        for (const DenseLayer& l : n.net.layers)
          layers.push_back(json{{"weights", l.weights},
                                {"bias", l.bias},
                                {"activation", to_string(l.activation)}});
        jn["layers"] = layers;
        break;
      }
      case NodeKind::pwl_curve: {
        jn["input"] = n.inputs[0];
        json knots = json::array();
        for (size_t i = 0; i < n.curve.xs.size(); ++i)
          knots.push_back(json::array({n.curve.xs[i], n.curve.ys[i]}));
        jn["knots"] = knots;
        break;
      }
      case NodeKind::linear:
        jn["inputs"] = n.inputs;
        jn["weights"] = n.weights;
        jn["bias"] = n.bias;
        break;
    }
    nodes.push_back(std::move(jn));
  }
  return json{{"version", 1},
              {"n_features", g.n_features},
              {"nodes", nodes},
              {"output_id", g.output_id}};
}

CompositionGraph model_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != 1) throw SchemaError("unsupported model version");
    CompositionGraph g;
    g.n_features = j.at("n_features").get<int>();
    const json& jnodes = j.at("nodes");
    g.nodes.resize(jnodes.size());
    for (const json& jn : jnodes) {
      int id = jn.at("id").get<int>();
      if (id < 0 || id >= static_cast<int>(g.nodes.size()))
        throw SchemaError("node id out of range");
      GraphNode& n = g.nodes[id];
      std::string kind = jn.at("kind").get<std::string>();
      if (kind == "input") {
        n.kind = NodeKind::input;
        n.features = jn.at("features").get<std::vector<int>>();
      } else if (kind == "tree_ensemble") {
        n.kind = NodeKind::tree_ensemble;
        n.ensemble.base_score = jn.value("base_score", 0.0);
        for (const json& jt : jn.at("trees")) {
          Tree t;
          tree_node_from_json(jt, t);
          n.ensemble.trees.push_back(std::move(t));
        }
        if (jn.contains("inputs")) n.inputs = jn.at("inputs").get<std::vector<int>>();
      } else if (kind == "dense") {
        n.kind = NodeKind::dense;
        n.inputs = {jn.at("input").get<int>()};
        for (const json& jl : jn.at("layers")) {
          DenseLayer l;
          l.weights = jl.at("weights").get<std::vector<std::vector<double>>>();
          l.bias = jl.at("bias").get<std::vector<double>>();
          l.activation = activation_from_string(jl.at("activation").get<std::string>());
          n.net.layers.push_back(std::move(l));
        }
      } else if (kind == "pwl_curve") {
        n.kind = NodeKind::pwl_curve;
        n.inputs = {jn.at("input").get<int>()};
        for (const auto& k : jn.at("knots")) {
          n.curve.xs.push_back(k[0].get<double>());
          n.curve.ys.push_back(k[1].get<double>());
        }
      } else if (kind == "linear") {
        n.kind = NodeKind::linear;
        n.inputs = jn.at("inputs").get<std::vector<int>>();
        n.weights = jn.at("weights").get<std::vector<double>>();
        n.bias = jn.value("bias", 0.0);
      } else {
        throw SchemaError("unknown node kind: " + kind);
      }
    }
    g.output_id = j.at("output_id").get<int>();
    g.finalize();
    return g;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  }
}

void write_model_file(const CompositionGraph& g, const std::string& path) {
  write_text_file(path, model_to_json(g).dump(2) + "\n");
}

CompositionGraph read_model_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace gig
