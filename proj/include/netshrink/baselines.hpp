#ifndef NETSHRINK_BASELINES_HPP
#define NETSHRINK_BASELINES_HPP

#include "netshrink/optimizer.hpp"

namespace netshrink {

// Reference intervention strategies, compared against the optimizer at equal
// budget. Sequence overloads treat all steps' edges as one pool sharing the
// budget. Each result records the objective before and after at the
// strategy's scoring rank (1 unless stated otherwise).

// M = (1 - B/total) * W on every support edge.
InterventionResult uniform_reduction(const WeightedGraph& g, const BudgetSpec& budget,
                                     const SvdOptions& opts = {});
InterventionResult uniform_reduction(const GraphSequence& seq, const BudgetSpec& budget,
                                     const SvdOptions& opts = {});

// Per-edge reduction proportional to W_ij^2, clamped at W_ij with the excess
// redistributed among unclamped edges until the budget is consumed.
InterventionResult weighted_reduction(const WeightedGraph& g, const BudgetSpec& budget,
                                      const SvdOptions& opts = {});
InterventionResult weighted_reduction(const GraphSequence& seq, const BudgetSpec& budget,
                                      const SvdOptions& opts = {});

// Greedy deletion by rank-1 edge centrality of W itself; the boundary edge
// is reduced fractionally so budgets stay comparable across strategies.
InterventionResult k_edge_deletion(const WeightedGraph& g, const BudgetSpec& budget,
                                   const SvdOptions& opts = {});
InterventionResult k_edge_deletion(const GraphSequence& seq, const BudgetSpec& budget,
                                   const SvdOptions& opts = {});

// Single greedy pass at rank r with scores from W itself.
InterventionResult top_k_ec_oneshot(const WeightedGraph& g, const BudgetSpec& budget, int rank,
                                    const SvdOptions& opts = {});
InterventionResult top_k_ec_oneshot(const GraphSequence& seq, const BudgetSpec& budget, int rank,
                                    const SvdOptions& opts = {});

}  // namespace netshrink

#endif
