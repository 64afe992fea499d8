#ifndef NETSHRINK_OPTIMIZER_HPP
#define NETSHRINK_OPTIMIZER_HPP

#include <vector>

#include "netshrink/centrality.hpp"
#include "netshrink/graph.hpp"
#include "netshrink/svd.hpp"

namespace netshrink {

// Total allowed edge-weight reduction, absolute or as a fraction of the
// total weight, resolved against the actual graph at run time.
class BudgetSpec {
public:
    static BudgetSpec absolute(double b);
    static BudgetSpec fraction(double f);
    double resolve(double total_weight) const;
    bool is_fraction() const { return kind_ == Kind::fraction; }
    double raw_value() const { return value_; }

private:
    enum class Kind { absolute, fraction };
    BudgetSpec(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

// Candidate step sizes in [0, 1]; 0 is always present so a step can be
// rejected and descent stays monotone.
class LineSearchGrid {
public:
    static LineSearchGrid log_spaced(double lo, double hi, int count);
    static LineSearchGrid from_values(std::vector<double> etas);
    static LineSearchGrid defaults() { return log_spaced(1e-3, 1e-1, 30); }

    const std::vector<double>& values() const { return etas_; }

private:
    LineSearchGrid() = default;
    std::vector<double> etas_;  // ascending, etas_[0] == 0
};

struct Reduction {
    int step = 0;
    int src = 0;
    int dst = 0;
    double amount = 0.0;
};

struct InterventionResult {
    GraphSequence reduced;               // one step for static problems
    std::vector<Reduction> reductions;   // positive amounts only
    std::vector<double> objective_trace; // f(M_0), f(M_1), ..., final
    std::vector<double> step_sizes;      // accepted eta per iteration
    double budget = 0.0;
    double budget_used = 0.0;
    int iterations_run = 0;
    int rank = 1;
    bool degenerate_gap_seen = false;

    const WeightedGraph& reduced_graph() const;  // requires a single step
};

struct FwOptions {
    int rank = 1;
    int iterations = 30;
    LineSearchGrid grid = LineSearchGrid::defaults();
    SvdOptions svd{};                // gradient/trace accuracy
    double line_search_tol = 1e-6;   // looser tol for candidate ordering
    double early_stop_rel = 1e-8;
    int threads = 0;                 // 0 = hardware concurrency
};

// Greedy linear minimization oracle: copies w_ref, zeroes its edges in
// descending order of the rank-r centrality scores of m_cur until the
// budget is spent; the boundary edge is reduced by the remaining budget.
// Edges with score <= 0 are never reduced, even if budget remains.
WeightedGraph top_k_edge_centrality(const WeightedGraph& w_ref, double budget,
                                    const WeightedGraph& m_cur, int rank,
                                    const SvdOptions& opts = {});

// Same oracle with one global sort across the union of all steps' edges and
// a single shared budget.
GraphSequence top_k_timevarying(const GraphSequence& w_ref, double budget,
                                const GraphSequence& m_cur, int rank,
                                const SvdOptions& opts = {});

InterventionResult frank_wolfe_static(const WeightedGraph& g, const BudgetSpec& budget,
                                      const FwOptions& opts);

InterventionResult frank_wolfe_timevarying(const GraphSequence& seq, const BudgetSpec& budget,
                                           const FwOptions& opts);

namespace detail {

// Flattened view of a sequence's edges with fixed-sparsity matrices whose
// values can be rewritten in place; shared by the optimizer and baselines.
class AlignedProblem {
public:
    explicit AlignedProblem(const GraphSequence& seq);

    int node_count() const { return n_; }
    int step_count() const { return s_; }
    std::size_t edge_total() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& step_of() const { return step_of_; }
    std::span<const Edge> step_edges(int t) const;
    const std::vector<double>& ref_weights() const { return ref_; }
    double weight_sum(const std::vector<double>& w) const;
    double used(const std::vector<double>& w) const;  // sum(ref - w)

    // Value rewrite + SVD over the current matrices.
    void set_weights(const std::vector<double>& w);
    SvdFactors factors(int rank, const SvdOptions& opts) const;
    std::vector<double> scores(const SvdFactors& f) const;  // aligned with edges()

    GraphSequence materialize(const std::vector<double>& w) const;

    AlignedProblem(const AlignedProblem&);
    AlignedProblem& operator=(const AlignedProblem&) = delete;

private:
    int n_ = 0;
    int s_ = 0;
    std::vector<bool> directed_;
    std::vector<Edge> edges_;
    std::vector<int> step_of_;
    std::vector<std::size_t> step_begin_;
    std::vector<double> ref_;
    std::vector<SparseMatrix> mats_;
    std::vector<std::vector<std::int64_t>> slots_;  // per step, per edge
};

// Reduces `weights` (a copy of it) greedily against the scores; returns the
// reduced vector and the amount spent.
std::pair<std::vector<double>, double> greedy_reduce(const AlignedProblem& p,
                                                     const std::vector<double>& weights,
                                                     const std::vector<double>& scores,
                                                     double budget);

InterventionResult make_result(const AlignedProblem& p, const std::vector<double>& final_w,
                               double budget, int rank);

}  // namespace detail

}  // namespace netshrink

#endif
