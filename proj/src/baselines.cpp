#include "netshrink/baselines.hpp"

#include <cmath>

namespace netshrink {

namespace {

using detail::AlignedProblem;

InterventionResult finish(AlignedProblem& p, std::vector<double> w, double B, int rank,
                          double f_before, const SvdOptions& opts) {
    p.set_weights(w);
    const double f_after = p.factors(rank, opts).objective();
    InterventionResult r = detail::make_result(p, w, B, rank);
    r.objective_trace = {f_before, f_after};
    r.iterations_run = 1;
    return r;
}

InterventionResult uniform_impl(const GraphSequence& seq, const BudgetSpec& budget,
                                const SvdOptions& opts) {
    AlignedProblem p(seq);
    const double total = p.weight_sum(p.ref_weights());
    const double B = budget.resolve(total);
    const double f_before = p.factors(1, opts).objective();
    const double keep = total > 0.0 ? 1.0 - B / total : 1.0;
    std::vector<double> w = p.ref_weights();
    for (double& x : w) x = std::max(x * keep, 0.0);
    if (B == total) std::fill(w.begin(), w.end(), 0.0);
    return finish(p, std::move(w), B, 1, f_before, opts);
}

InterventionResult weighted_impl(const GraphSequence& seq, const BudgetSpec& budget,
                                 const SvdOptions& opts) {
    AlignedProblem p(seq);
    const double total = p.weight_sum(p.ref_weights());
    const double B = budget.resolve(total);
    const double f_before = p.factors(1, opts).objective();
    const auto& ref = p.ref_weights();
    const std::size_t m = ref.size();

    // shares proportional to W_ij^2, clamped at W_ij, excess redistributed
    std::vector<double> reduction(m, 0.0);
    std::vector<bool> clamped(m, false);
    for (std::size_t pass = 0; pass <= m; ++pass) {
        double assigned = 0.0;
        for (std::size_t i = 0; i < m; ++i) assigned += reduction[i];
        const double left = B - assigned;
        if (left <= 1e-15 * std::max(B, 1.0)) break;
        double denom = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (!clamped[i]) denom += ref[i] * ref[i];
        if (denom <= 0.0) break;
        bool new_clamp = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (clamped[i]) continue;
            const double share = left * ref[i] * ref[i] / denom;
            if (reduction[i] + share >= ref[i]) {
                reduction[i] = ref[i];
                clamped[i] = true;
                new_clamp = true;
            }
        }
        if (!new_clamp) {
            for (std::size_t i = 0; i < m; ++i)
                if (!clamped[i]) reduction[i] += left * ref[i] * ref[i] / denom;
            break;
        }
    }
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = std::max(ref[i] - reduction[i], 0.0);
    return finish(p, std::move(w), B, 1, f_before, opts);
}

InterventionResult greedy_impl(const GraphSequence& seq, const BudgetSpec& budget, int rank,
                               const SvdOptions& opts) {
    AlignedProblem p(seq);
    const double total = p.weight_sum(p.ref_weights());
    const double B = budget.resolve(total);
    const SvdFactors f = p.factors(rank, opts);
    const double f_before = f.objective();
    auto [w, spent] = detail::greedy_reduce(p, p.ref_weights(), p.scores(f), B);
    InterventionResult r = finish(p, std::move(w), B, rank, f_before, opts);
    r.degenerate_gap_seen = f.degenerate_gap;
    return r;
}

}  // namespace

InterventionResult uniform_reduction(const WeightedGraph& g, const BudgetSpec& budget,
                                     const SvdOptions& opts) {
    return uniform_impl(GraphSequence({g}), budget, opts);
}
InterventionResult uniform_reduction(const GraphSequence& seq, const BudgetSpec& budget,
                                     const SvdOptions& opts) {
    return uniform_impl(seq, budget, opts);
}

InterventionResult weighted_reduction(const WeightedGraph& g, const BudgetSpec& budget,
                                      const SvdOptions& opts) {
    return weighted_impl(GraphSequence({g}), budget, opts);
}
InterventionResult weighted_reduction(const GraphSequence& seq, const BudgetSpec& budget,
                                      const SvdOptions& opts) {
    return weighted_impl(seq, budget, opts);
}

InterventionResult k_edge_deletion(const WeightedGraph& g, const BudgetSpec& budget,
                                   const SvdOptions& opts) {
    return greedy_impl(GraphSequence({g}), budget, 1, opts);
}
InterventionResult k_edge_deletion(const GraphSequence& seq, const BudgetSpec& budget,
                                   const SvdOptions& opts) {
    return greedy_impl(seq, budget, 1, opts);
}

InterventionResult top_k_ec_oneshot(const WeightedGraph& g, const BudgetSpec& budget, int rank,
                                    const SvdOptions& opts) {
    return greedy_impl(GraphSequence({g}), budget, rank, opts);
}
InterventionResult top_k_ec_oneshot(const GraphSequence& seq, const BudgetSpec& budget, int rank,
                                    const SvdOptions& opts) {
    return greedy_impl(seq, budget, rank, opts);
}

}  // namespace netshrink
