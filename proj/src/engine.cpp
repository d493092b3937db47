#include "gig/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gig/exact_eval.hpp"
#include "gig/log.hpp"

namespace gig {

Explainer::Explainer(const CompositionGraph& graph, EngineConfig config)
    : graph_(graph), config_(std::move(config)) {
  if (!graph_.finalized()) throw ModelError("explainer needs a finalized graph");
  auto diags = graph_.validate();
  if (!diags.empty()) throw ModelError("explainer: graph failed validation: " + diags.front());
  table_ = extract_boundaries(graph_);
}

namespace {

FeatureVector lerp_point(const PathQuery& q, double alpha) {
  FeatureVector x(q.s.size());
  for (size_t i = 0; i < x.size(); ++i) x[i] = q.s[i] + alpha * (q.e[i] - q.s[i]);
  return x;
}

void add_sparse(std::vector<Rational>& acc, const CornerVector& v) {
  for (size_t i = 0; i < v.features.size(); ++i) acc[v.features[i]] += v.values[i];
}

FeatureVector to_dense(const std::vector<Rational>& acc) {
  FeatureVector out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) out[i] = rat_to_double(acc[i]);
  return out;
}

}  // namespace

Attribution Explainer::explain(const PathQuery& q) const {
  const int n = graph_.n_features;
  check_feature_vector(q.s, n);
  check_feature_vector(q.e, n);

  Attribution out;
  out.total.assign(n, 0.0);
  out.zeta_sum.assign(n, 0.0);
  out.iota_start.assign(n, 0.0);
  out.iota_end.assign(n, 0.0);
  out.integral.assign(n, 0.0);
  out.f_s = graph_.eval(q.s);
  out.f_e = graph_.eval(q.e);

  if (q.s == q.e) return out;  // zero attribution, forced by reflexivity

  auto crossings = enumerate_crossings(table_, q);
  double delta = config_.delta_override.value_or(safe_step(table_, crossings, q));
  if (!(delta > 0.0)) throw ModelError("explain: non-positive safe step");

  for (const Crossing& c : crossings)
    if (c.radix() > config_.max_radix)
      throw CapacityError("explain: crossing radix " + std::to_string(c.radix()) +
                          " exceeds max_radix " + std::to_string(config_.max_radix));

  const bool exact = graph_.exactly_evaluable();

  // interior corners
  std::vector<Rational> zeta_acc(n, Rational(0));
  for (const Crossing& c : crossings) {
    CornerContext ctx;
    ctx.graph = &graph_;
    ctx.crossing = c;
    ctx.delta = delta;
    ctx.travel_signs.reserve(c.features.size());
    for (int f : c.features) ctx.travel_signs.push_back(q.e[f] > q.s[f] ? 1 : -1);
    add_sparse(zeta_acc, zeta(ctx));
    out.crossings_used.push_back({c.alpha, c.radix()});
  }

  // endpoint incidences; axes with s_i = e_i stay out (their credit is 0)
  auto endpoint_ctx = [&](const FeatureVector& point, bool start) {
    EndpointContext ctx;
    ctx.graph = &graph_;
    ctx.point = point;
    ctx.delta = delta;
    for (int f : endpoint_radix(table_, point)) {
      if (q.s[f] == q.e[f]) continue;
      ctx.features.push_back(f);
      double away = start ? q.e[f] - q.s[f] : q.s[f] - q.e[f];
      ctx.towards.push_back(away > 0.0 ? 1 : -1);
    }
    return ctx;
  };

  EndpointContext start_ctx = endpoint_ctx(q.s, true);
  EndpointContext end_ctx = endpoint_ctx(q.e, false);
  if (static_cast<int>(start_ctx.features.size()) > config_.max_radix ||
      static_cast<int>(end_ctx.features.size()) > config_.max_radix)
    throw CapacityError("explain: endpoint radix exceeds max_radix");

  std::vector<Rational> iota_start_acc(n, Rational(0));
  std::vector<Rational> iota_end_acc(n, Rational(0));
  if (!start_ctx.features.empty()) add_sparse(iota_start_acc, iota(start_ctx, PathEnd::start));
  if (!end_ctx.features.empty()) add_sparse(iota_end_acc, iota(end_ctx, PathEnd::end));

  // open segments between consecutive crossings
  if (graph_.continuous_dependence()) {
    std::vector<double> cuts{0.0};
    for (const Crossing& c : crossings) cuts.push_back(c.alpha);
    cuts.push_back(1.0);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i] < cuts[i + 1])) continue;
      Segment seg;
      seg.lo = cuts[i];
      seg.hi = cuts[i + 1];
      seg.cells.probe = lerp_point(q, 0.5 * (seg.lo + seg.hi));
      FeatureVector part = segment_ig(graph_, q, seg, config_.quadrature);
      for (int f = 0; f < n; ++f) out.integral[f] += part[f];
    }
  }

  out.zeta_sum = to_dense(zeta_acc);
  out.iota_start = to_dense(iota_start_acc);
  out.iota_end = to_dense(iota_end_acc);
  for (int f = 0; f < n; ++f)
    out.total[f] = out.zeta_sum[f] + out.iota_start[f] + out.iota_end[f] + out.integral[f];

  if (exact) {
    // residual in rational arithmetic: exactly 0 for piecewise-constant graphs
    Rational sum(0);
    for (int f = 0; f < n; ++f) sum += zeta_acc[f] + iota_start_acc[f] + iota_end_acc[f];
    Rational residual = sum - (eval_exact(graph_, q.e) - eval_exact(graph_, q.s));
    out.efficiency_residual = rat_to_double(residual);
  } else {
    double sum = 0.0;
    for (int f = 0; f < n; ++f) sum += out.total[f];
    out.efficiency_residual = sum - (out.f_e - out.f_s);
  }
  return out;
}

Attribution explain(const CompositionGraph& graph, const ExplainRequest& req) {
  Explainer ex(graph, req.config);
  return ex.explain(req.query);
}

std::vector<BatchItem> explain_batch(const CompositionGraph& graph,
                                     const std::vector<PathQuery>& queries,
                                     const EngineConfig& config, int jobs) {
  Explainer ex(graph, config);
  std::vector<BatchItem> out(queries.size());
  auto run_range = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      try {
        out[i].attribution = ex.explain(queries[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1 || queries.size() < 2) {
    run_range(0, queries.size());
    return out;
  }
  size_t per = (queries.size() + jobs - 1) / jobs;
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs; ++t) {
    size_t begin = t * per;
    if (begin >= queries.size()) break;
    size_t end = std::min(queries.size(), begin + per);
    threads.emplace_back(run_range, begin, end);
  }
  for (auto& th : threads) th.join();
  return out;
}

AxiomReport axiom_audit(const CompositionGraph& graph, const PathQuery& q,
                        const EngineConfig& config, const CompositionGraph* other, double alpha,
                        double beta) {
  AxiomReport report;
  Explainer ex(graph, config);
  Attribution fwd = ex.explain(q);
  Attribution rev = ex.explain(PathQuery{q.e, q.s});

  report.efficiency_residual = std::abs(fwd.efficiency_residual);
  for (int f = 0; f < graph.n_features; ++f) {
    report.reflexivity_dev = std::max(report.reflexivity_dev, std::abs(fwd.total[f] + rev.total[f]));
    if (q.s[f] == q.e[f])
      report.constant_var_dev = std::max(report.constant_var_dev, std::abs(fwd.total[f]));
    if (!graph.used_features()[f])
      report.null_var_dev = std::max(report.null_var_dev, std::abs(fwd.total[f]));
  }

  if (other) {
    CompositionGraph combo = lin_combine(graph, *other, alpha, beta);
    Attribution fg = explain(combo, ExplainRequest{q, config});
    Attribution g_only = explain(*other, ExplainRequest{q, config});
    double dev = 0.0;
    for (int f = 0; f < graph.n_features; ++f)
      dev = std::max(dev,
                     std::abs(fg.total[f] - (alpha * fwd.total[f] + beta * g_only.total[f])));
    report.linearity_dev = dev;
  }
  return report;
}

}  // namespace gig
