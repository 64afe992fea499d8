#ifndef NETSHRINK_GRAPH_HPP
#define NETSHRINK_GRAPH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "netshrink/common.hpp"

namespace netshrink {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

// Immutable sparse nonnegative weight matrix over a fixed node set.
// Edges are kept sorted row-major; exact-zero weights are not stored.
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(int node_count, std::vector<Edge> edges, bool directed = true);

    int node_count() const { return node_count_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
    bool directed() const { return directed_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Sum over stored edges in storage order; bit-for-bit reproducible.
    double total_weight() const;

    // Edges leaving node i (row i of the weight matrix).
    std::span<const Edge> out_edges(int i) const;

    SparseMatrix to_sparse() const;

    // Same support, weights multiplied by c >= 0 (c == 0 gives the empty graph).
    WeightedGraph scaled(double c) const;

    bool operator==(const WeightedGraph& other) const = default;

private:
    int node_count_ = 0;
    bool directed_ = true;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> row_ptr_;
};

// Weighted bipartite network: rows are groups, columns are locations.
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(int left_count, int right_count, std::vector<Edge> edges);

    int left_count() const { return left_count_; }
    int right_count() const { return right_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const Edge> row_edges(int i) const;
    double total_weight() const;

    SparseMatrix to_sparse() const;  // left_count x right_count

private:
    int left_count_ = 0;
    int right_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> row_ptr_;
};

// Ordered list of weight matrices sharing one node set.
class GraphSequence {
public:
    GraphSequence() = default;
    explicit GraphSequence(std::vector<WeightedGraph> steps);

    int node_count() const;
    int step_count() const { return static_cast<int>(steps_.size()); }
    const WeightedGraph& step(int t) const { return steps_.at(static_cast<std::size_t>(t)); }
    const std::vector<WeightedGraph>& steps() const { return steps_; }
    double total_weight() const;

private:
    std::vector<WeightedGraph> steps_;
};

// Named scalar weight transform applied elementwise.
struct WeightTransform {
    enum class Kind { identity, exp_div };
    Kind kind = Kind::identity;
    double divisor = 1.0;

    static WeightTransform identity() { return {Kind::identity, 1.0}; }
    static WeightTransform exp_div(double c);

    double operator()(double w) const;
};

// Same support, weights mapped elementwise; rejects negative or non-finite outputs.
WeightedGraph transform_weights(const WeightedGraph& g, const WeightTransform& map);

// W = B * B^T restricted to nonzero entries; n = left_count.
WeightedGraph bipartite_to_square(const BipartiteGraph& b);

}  // namespace netshrink

#endif
