#ifndef NETSHRINK_SYNTHETIC_HPP
#define NETSHRINK_SYNTHETIC_HPP

#include <cstdint>

#include "netshrink/graph.hpp"

namespace netshrink {

// Directed random graph: `edge_count` distinct (src, dst) pairs with weights
// uniform in [w_min, w_max].
WeightedGraph random_graph(int node_count, std::int64_t edge_count, double w_min, double w_max,
                           std::uint64_t seed);

// Directed random graph with Pareto-tailed weights: w = w_min * u^(-1/alpha),
// capped at `cap`.
WeightedGraph heavy_tailed_graph(int node_count, std::int64_t edge_count, double alpha,
                                 double w_min, double cap, std::uint64_t seed);

}  // namespace netshrink

#endif
