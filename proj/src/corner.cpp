#include "gig/corner.hpp"

#include <bit>
#include <mutex>

#include "gig/exact_eval.hpp"

namespace gig {

// -----------------------------------------------------------------
// eta table
// -----------------------------------------------------------------

namespace {

struct EtaTable {
  // entries[k-1][j] = j!(k-j-1)!/k!
  std::vector<std::vector<Rational>> entries;

  EtaTable() {
    entries.resize(kMaxRadix);
    for (int k = 1; k <= kMaxRadix; ++k) {
      auto& row = entries[k - 1];
      row.reserve(k);
      for (int j = 0; j < k; ++j)
        row.push_back(rat_factorial(j) * rat_factorial(k - j - 1) / rat_factorial(k));
    }
  }
};

const EtaTable& eta_table() {
  static const EtaTable table;
  return table;
}

}  // namespace

const Rational& eta(int k, int j) {
  if (k < 1 || k > kMaxRadix)
    throw CapacityError("eta: radix " + std::to_string(k) + " outside [1, " +
                        std::to_string(kMaxRadix) + "]");
  if (j < 0 || j >= k) throw std::out_of_range("eta: j must lie in [0, k)");
  return eta_table().entries[k - 1][j];
}

const std::vector<Rational>& orthant_weight_vector(int k, uint32_t mismatch_mask) {
  if (k < 1 || k > kMaxRadix) throw CapacityError("orthant_weight_vector: invalid radix");
  // cached per (k, mask); built on demand, then immutable
  static std::vector<std::vector<std::vector<Rational>>> cache(kMaxRadix + 1);
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& per_k = cache[k];
  if (per_k.empty()) per_k.resize(size_t{1} << k);
  auto& entry = per_k[mismatch_mask];
  if (entry.empty()) {
    int j = std::popcount(mismatch_mask);
    entry.reserve(k);
    for (int i = 0; i < k; ++i) {
      bool mismatched = (mismatch_mask >> i) & 1u;
      entry.push_back(mismatched ? -eta(k, j - 1) : eta(k, j));
    }
  }
  return entry;
}

// -----------------------------------------------------------------
// Shapley
// -----------------------------------------------------------------

std::vector<Rational> shapley(const LiftSpec& lift) {
  const int n = lift.n_players;
  if (n < 1 || n > kMaxRadix)
    throw CapacityError("shapley: player count outside [1, " + std::to_string(kMaxRadix) + "]");

  std::vector<Rational> coalition_weight(n);  // for |S| = m: m!(n-m-1)!/n!
  for (int m = 0; m < n; ++m)
    coalition_weight[m] = rat_factorial(m) * rat_factorial(n - m - 1) / rat_factorial(n);

  const uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::vector<Rational> values(size_t{1} << n);
  for (uint32_t mask = 0; mask <= full; ++mask) values[mask] = lift.value(mask);

  std::vector<Rational> phi(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    uint32_t bit = 1u << i;
    for (uint32_t mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      phi[i] += coalition_weight[std::popcount(mask)] * (values[mask | bit] - values[mask]);
    }
  }
  return phi;
}

LiftSpec empty_set_lift(const Rational& fx, int n) {
  return {n, [fx](uint32_t mask) { return mask == 0 ? Rational(0) : fx; }};
}

LiftSpec grand_lift(const Rational& fx, int n) {
  const uint32_t full = (1u << n) - 1u;
  return {n, [fx, full](uint32_t mask) { return mask == full ? fx : Rational(0); }};
}

LiftSpec half_weight_lift(const Rational& fx, int n) {
  const uint32_t full = (1u << n) - 1u;
  return {n, [fx, full, n](uint32_t mask) -> Rational {
            if (mask == full) return fx;
            if (std::popcount(mask) == n - 1) {
              int missing = std::countr_zero(~mask & full) + 1;  // players numbered 1..n
              return fx - missing;
            }
            return Rational(0);
          }};
}

HalfWeightDemo half_weight_demo_values(const Rational& fx, int n) {
  HalfWeightDemo demo;
  for (int i = 1; i <= n; ++i) demo.per_player.push_back((fx - i) / n);
  demo.correction = Rational(n + 1, 2);
  return demo;
}

// -----------------------------------------------------------------
// corner credit
// -----------------------------------------------------------------

FeatureVector CornerVector::dense(int n_features) const {
  FeatureVector out(n_features, 0.0);
  for (size_t i = 0; i < features.size(); ++i) out[features[i]] = rat_to_double(values[i]);
  return out;
}

Rational CornerVector::sum() const {
  Rational acc(0);
  for (const auto& v : values) acc += v;
  return acc;
}

namespace {

// One-sided limit value, exact when the graph allows it.
Rational probe_value(const CompositionGraph& g, const FeatureVector& x,
                     const FeatureVector& probe, EvalScratch& scratch) {
  if (g.exactly_evaluable()) return eval_exact(g, probe);
  return rat_from_double(g.eval_split(x, CellAssignment{probe}, scratch));
}

// Probe for the orthant with the given mismatch mask: mismatched axes
// step back toward the start, matched axes toward the end. For
// clustered crossings the step is taken from the cluster edge.
FeatureVector corner_probe(const CornerContext& ctx, uint32_t mismatch_mask) {
  FeatureVector probe = ctx.crossing.point;
  for (size_t i = 0; i < ctx.crossing.features.size(); ++i) {
    int f = ctx.crossing.features[i];
    int dir = ((mismatch_mask >> i) & 1u) ? -ctx.travel_signs[i] : ctx.travel_signs[i];
    if (dir > 0)
      probe[f] = std::max(ctx.crossing.lo[i], ctx.crossing.hi[i]) + ctx.delta;
    else
      probe[f] = std::min(ctx.crossing.lo[i], ctx.crossing.hi[i]) - ctx.delta;
  }
  return probe;
}

void check_radix(int k, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": empty corner");
  if (k > kMaxRadix)
    throw CapacityError(std::string(who) + ": radix " + std::to_string(k) + " exceeds " +
                        std::to_string(kMaxRadix));
}

}  // namespace

CornerVector zeta(const CornerContext& ctx) {
  const int k = ctx.crossing.radix();
  check_radix(k, "zeta");
  CornerVector out;
  out.features = ctx.crossing.features;
  out.values.assign(k, Rational(0));

  EvalScratch scratch;
  const uint32_t n_orthants = 1u << k;
  for (uint32_t mask = 0; mask < n_orthants; ++mask) {
    FeatureVector probe = corner_probe(ctx, mask);
    Rational v = probe_value(*ctx.graph, ctx.crossing.point, probe, scratch);
    const auto& w = orthant_weight_vector(k, mask);
    for (int i = 0; i < k; ++i) out.values[i] += w[i] * v;
  }
  return out;
}

CornerVector shapley_lift_oracle(const CornerContext& ctx) {
  const int k = ctx.crossing.radix();
  check_radix(k, "shapley_lift_oracle");

  // lift value of subset S: one-sided limit with in-S axes on the
  // arrival side, out-of-S axes on the departure side, rebased so the
  // empty set maps to 0
  EvalScratch scratch;
  const uint32_t full = (1u << k) - 1u;
  std::vector<Rational> raw(size_t{1} << k);
  for (uint32_t s = 0; s <= full; ++s) {
    // subset mask s marks matched axes, so the orthant's mismatch mask
    // is its complement
    FeatureVector probe = corner_probe(ctx, ~s & full);
    raw[s] = probe_value(*ctx.graph, ctx.crossing.point, probe, scratch);
  }
  Rational base = raw[0];

  LiftSpec lift{k, [&raw, &base](uint32_t mask) { return raw[mask] - base; }};
  auto phi = shapley(lift);

  CornerVector out;
  out.features = ctx.crossing.features;
  out.values = std::move(phi);
  return out;
}

CornerVector iota(const EndpointContext& ctx, PathEnd which) {
  const int k = static_cast<int>(ctx.features.size());
  CornerVector out;
  out.features = ctx.features;
  if (k == 0) return out;
  check_radix(k, "iota");
  out.values.assign(k, Rational(0));

  EvalScratch scratch;
  Rational at_point = probe_value(*ctx.graph, ctx.point, ctx.point, scratch);

  const uint32_t n_orthants = 1u << k;
  const uint32_t all_mismatch = n_orthants - 1u;
  for (uint32_t mask = 0; mask < n_orthants; ++mask) {
    if (mask == all_mismatch) continue;  // the orthant behind the endpoint carries no weight
    FeatureVector probe = ctx.point;
    for (int i = 0; i < k; ++i) {
      int dir = ((mask >> i) & 1u) ? -ctx.towards[i] : ctx.towards[i];
      probe[ctx.features[i]] = ctx.point[ctx.features[i]] + ctx.delta * dir;
    }
    Rational v = probe_value(*ctx.graph, ctx.point, probe, scratch) - at_point;
    const auto& w = orthant_weight_vector(k, mask);
    if (mask == 0) {
      for (int i = 0; i < k; ++i) out.values[i] += w[i] * v;
    } else {
      for (int i = 0; i < k; ++i) out.values[i] += w[i] * v / 2;
    }
  }
  if (which == PathEnd::end)
    for (auto& v : out.values) v = -v;
  return out;
}

}  // namespace gig
