#pragma once

#include "gig/model.hpp"
#include "gig/rational.hpp"

namespace gig {

// Rational evaluation of a graph whose reachable nodes are all tree
// ensembles, linear combiners or curves (graph.exactly_evaluable()).
// Tree routing decisions are made on the double probe exactly as in
// eval_split; only the accumulation is exact.
Rational eval_exact(const CompositionGraph& g, const FeatureVector& probe);

}  // namespace gig
