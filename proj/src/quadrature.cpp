#include "gig/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gig {

// -----------------------------------------------------------------
// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence
// -----------------------------------------------------------------

static std::vector<std::pair<double, double>> compute_gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based starting guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  // ascending nodes
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

bool resolve_refine(const CompositionGraph& g, const QuadratureConfig& cfg) {
  if (cfg.refine.has_value()) return *cfg.refine;
  return g.has_curve_nodes();
}

// -----------------------------------------------------------------
// segment integration
// -----------------------------------------------------------------

namespace {

struct SegmentIntegrator {
  const CompositionGraph& g;
  const PathQuery& q;
  const Segment& seg;
  const QuadratureConfig& cfg;
  bool refine;
  EvalScratch scratch;

  FeatureVector point_at(double alpha) const {
    FeatureVector x(q.s.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = q.s[i] + alpha * (q.e[i] - q.s[i]);
    return x;
  }

  // integrand already scaled per feature by (e_i - s_i)
  FeatureVector scaled_gradient(double alpha) {
    FeatureVector grad = g.gradient(point_at(alpha), seg.cells, scratch);
    for (size_t i = 0; i < grad.size(); ++i) {
      double d = q.e[i] - q.s[i];
      grad[i] = d == 0.0 ? 0.0 : grad[i] * d;
      if (!std::isfinite(grad[i]))
        throw ModelError("non-finite gradient at quadrature node alpha=" + std::to_string(alpha));
    }
    return grad;
  }

  FeatureVector panel(double a, double b) {
    const auto& nw = gauss_legendre(cfg.nodes_per_panel);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    // fixed pairwise reduction for a reproducible sum
    std::vector<FeatureVector> terms;
    terms.reserve(nw.size());
    for (const auto& [node, weight] : nw) {
      FeatureVector v = scaled_gradient(mid + half * node);
      for (double& c : v) c *= weight * half;
      terms.push_back(std::move(v));
    }
    return pairwise_sum(std::move(terms));
  }

  static FeatureVector pairwise_sum(std::vector<FeatureVector> terms) {
    if (terms.empty()) return {};
    while (terms.size() > 1) {
      size_t half = (terms.size() + 1) / 2;
      for (size_t i = 0; i + half < terms.size(); ++i) {
        auto& dst = terms[i];
        const auto& src = terms[i + half];
        for (size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
      }
      terms.resize(half);
    }
    return std::move(terms[0]);
  }

  static double max_abs_diff(const FeatureVector& a, const FeatureVector& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }

  FeatureVector adaptive_panel(double a, double b, int depth) {
    FeatureVector whole = panel(a, b);
    if (!refine) return whole;
    double mid = 0.5 * (a + b);
    FeatureVector left = panel(a, mid);
    FeatureVector right = panel(mid, b);
    FeatureVector split = left;
    for (size_t i = 0; i < split.size(); ++i) split[i] += right[i];
    if (depth >= 24 || max_abs_diff(whole, split) <= cfg.refine_tol) return split;
    FeatureVector l = adaptive_panel(a, mid, depth + 1);
    FeatureVector r = adaptive_panel(mid, b, depth + 1);
    for (size_t i = 0; i < l.size(); ++i) l[i] += r[i];
    return l;
  }

  FeatureVector run() {
    std::vector<FeatureVector> parts;
    parts.reserve(cfg.panels);
    for (int p = 0; p < cfg.panels; ++p) {
      double a = seg.lo + (seg.hi - seg.lo) * p / cfg.panels;
      double b = seg.lo + (seg.hi - seg.lo) * (p + 1) / cfg.panels;
      parts.push_back(adaptive_panel(a, b, 0));
    }
    return pairwise_sum(std::move(parts));
  }
};

}  // namespace

FeatureVector segment_ig(const CompositionGraph& g, const PathQuery& q, const Segment& seg,
                         const QuadratureConfig& cfg) {
  if (cfg.panels < 1 || cfg.nodes_per_panel < 2)
    throw std::invalid_argument("segment_ig: malformed quadrature config");
  if (!(seg.lo < seg.hi)) throw std::invalid_argument("segment_ig: empty segment");
  if (!g.continuous_dependence()) return FeatureVector(g.n_features, 0.0);
  SegmentIntegrator integ{g, q, seg, cfg, resolve_refine(g, cfg), {}};
  return integ.run();
}

FeatureVector ig_full_path(const CompositionGraph& g, const PathQuery& q,
                           const QuadratureConfig& cfg) {
  check_feature_vector(q.s, g.n_features);
  check_feature_vector(q.e, g.n_features);
  BoundaryTable table = extract_boundaries(g);
  if (!enumerate_crossings(table, q).empty())
    throw ModelError("ig_full_path: path crosses a discontinuity boundary");
  if (q.s == q.e) return FeatureVector(g.n_features, 0.0);
  Segment seg;
  seg.lo = 0.0;
  seg.hi = 1.0;
  seg.cells.probe.resize(q.s.size());
  for (size_t i = 0; i < q.s.size(); ++i) seg.cells.probe[i] = q.s[i] + 0.5 * (q.e[i] - q.s[i]);
  return segment_ig(g, q, seg, cfg);
}

}  // namespace gig
