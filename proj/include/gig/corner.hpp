#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gig/boundary.hpp"
#include "gig/model.hpp"
#include "gig/rational.hpp"

namespace gig {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxRadix = 20;

// eta(k, j) = j! (k-j-1)! / k!, the signed-orthant weight magnitude.
// Exact; 1 <= k <= kMaxRadix, 0 <= j < k.
const Rational& eta(int k, int j);

// Weight vector for the orthant whose axes in `mismatch_mask` point
// back toward the start. With j = popcount(mask): matched axes get
// +eta(k, j), mismatched axes get -eta(k, j-1). Components sum to +1
// (j = 0), -1 (j = k), and 0 otherwise.
const std::vector<Rational>& orthant_weight_vector(int k, uint32_t mismatch_mask);

// -----------------------------------------------------------------
// exact Shapley machinery
// -----------------------------------------------------------------

// Set function over subsets of {0..n_players-1}, encoded as bitmasks.
struct LiftSpec {
  int n_players = 0;
  std::function<Rational(uint32_t)> value;  // value(0) should be 0
};

// phi_i = sum over S not containing i of |S студ|!(n-|S|-1)!/n! *
// (v(S+i) - v(S)); exact, 2^n enumeration, n <= kMaxRadix.
std::vector<Rational> shapley(const LiftSpec& lift);

LiftSpec empty_set_lift(const Rational& fx, int n);   // 0 on the empty set, f(x) elsewhere
LiftSpec grand_lift(const Rational& fx, int n);       // f(x) on the full set, 0 elsewhere
LiftSpec half_weight_lift(const Rational& fx, int n); // f(x)-i on each co-singleton (players 1..n)

// The half-weight numbers as the non-uniqueness demonstration states
// them: per-player (f(x)-i)/n plus the bookkeeping remainder (n+1)/2
// that restores the sum to f(x).
struct HalfWeightDemo {
  std::vector<Rational> per_player;
  Rational correction;
};
HalfWeightDemo half_weight_demo_values(const Rational& fx, int n);

// -----------------------------------------------------------------
// corner credit
// -----------------------------------------------------------------

// One interior crossing plus everything needed to probe around it.
struct CornerContext {
  const CompositionGraph* graph = nullptr;
  Crossing crossing;
  std::vector<int> travel_signs;  // sign(e_i - s_i) per crossing feature
  double delta = 0.0;
};

// Sparse credit vector supported on a corner's features, exact.
struct CornerVector {
  std::vector<int> features;
  std::vector<Rational> values;

  FeatureVector dense(int n_features) const;
  Rational sum() const;
};

// Credit of one interior discontinuity: the orthant sum
//   zeta = sum_D w(D) * f(point, cells displaced delta*D)
// over all 2^k orthants D around the crossing, in the travel frame.
CornerVector zeta(const CornerContext& ctx);

// Independent check for zeta: the same one-sided limits fed through
// the subset-enumeration Shapley formula instead of orthant weights.
CornerVector shapley_lift_oracle(const CornerContext& ctx);

enum class PathEnd { start, end };

// Endpoint incidence. `towards` holds, per incident axis, the sign of
// travel away from the endpoint (start: sign(e_i - s_i); end:
// sign(s_i - e_i), i.e. the reversed frame).
struct EndpointContext {
  const CompositionGraph* graph = nullptr;
  FeatureVector point;
  std::vector<int> features;  // incident axes, constant axes excluded
  std::vector<int> towards;
  double delta = 0.0;
};

// Half-corner contribution when a path endpoint lies on thresholds:
// full weight on the orthant the path occupies next to the endpoint,
// half weight on mixed orthants, none on the opposite orthant, all
// relative to the value at the endpoint itself. The end case is the
// start case computed in the reversed frame and negated, which makes
// reflexivity exact.
CornerVector iota(const EndpointContext& ctx, PathEnd which);

}  // namespace gig
