#include "netshrink/graph.hpp"

#include <algorithm>
#include <cmath>

namespace netshrink {

namespace {

// Sorts row-major, drops exact zeros, validates range/positivity/uniqueness.
// Returns the row pointer array for the sorted edges.
std::vector<std::int64_t> normalize_edges(std::vector<Edge>& edges, int rows, int cols,
                                          const char* what) {
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= rows || e.dst < 0 || e.dst >= cols)
            throw DataError(std::string(what) + ": edge index out of range");
        if (!std::isfinite(e.weight)) throw DataError(std::string(what) + ": non-finite weight");
        if (e.weight < 0.0) throw DataError(std::string(what) + ": negative weight");
    }
    std::erase_if(edges, [](const Edge& e) { return e.weight == 0.0; });
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (edges[k].src == edges[k - 1].src && edges[k].dst == edges[k - 1].dst)
            throw DataError(std::string(what) + ": duplicate edge (" +
                            std::to_string(edges[k].src) + ", " + std::to_string(edges[k].dst) +
                            ")");
    std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
    for (const Edge& e : edges) ++row_ptr[static_cast<std::size_t>(e.src) + 1];
    for (int i = 0; i < rows; ++i) row_ptr[static_cast<std::size_t>(i) + 1] += row_ptr[i];
    return row_ptr;
}

SparseMatrix sparse_from_edges(const std::vector<Edge>& edges, int rows, int cols) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(edges.size());
    for (const Edge& e : edges) trip.emplace_back(e.src, e.dst, e.weight);
    SparseMatrix m(rows, cols);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

double sum_weights(const std::vector<Edge>& edges) {
    double s = 0.0;
    for (const Edge& e : edges) s += e.weight;
    return s;
}

}  // namespace

WeightedGraph::WeightedGraph(int node_count, std::vector<Edge> edges, bool directed)
    : node_count_(node_count), directed_(directed), edges_(std::move(edges)) {
    if (node_count < 0) throw DataError("graph: negative node count");
    row_ptr_ = normalize_edges(edges_, node_count_, node_count_, "graph");
}

double WeightedGraph::total_weight() const { return sum_weights(edges_); }

std::span<const Edge> WeightedGraph::out_edges(int i) const {
    const auto b = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i) + 1]);
    return {edges_.data() + b, e - b};
}

SparseMatrix WeightedGraph::to_sparse() const {
    return sparse_from_edges(edges_, node_count_, node_count_);
}

WeightedGraph WeightedGraph::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DataError("graph: scale must be finite and >= 0");
    std::vector<Edge> scaled_edges = edges_;
    for (Edge& e : scaled_edges) e.weight *= c;
    return WeightedGraph(node_count_, std::move(scaled_edges), directed_);
}

BipartiteGraph::BipartiteGraph(int left_count, int right_count, std::vector<Edge> edges)
    : left_count_(left_count), right_count_(right_count), edges_(std::move(edges)) {
    if (left_count < 1) throw DataError("bipartite graph: left side must be nonempty");
    if (right_count < 0) throw DataError("bipartite graph: negative right count");
    row_ptr_ = normalize_edges(edges_, left_count_, right_count_, "bipartite graph");
}

std::span<const Edge> BipartiteGraph::row_edges(int i) const {
    const auto b = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i) + 1]);
    return {edges_.data() + b, e - b};
}

double BipartiteGraph::total_weight() const { return sum_weights(edges_); }

SparseMatrix BipartiteGraph::to_sparse() const {
    return sparse_from_edges(edges_, left_count_, right_count_);
}

GraphSequence::GraphSequence(std::vector<WeightedGraph> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw DataError("graph sequence: needs at least one step");
    for (const WeightedGraph& g : steps_)
        if (g.node_count() != steps_.front().node_count())
            throw DataError("graph sequence: node count mismatch");
}

int GraphSequence::node_count() const { return steps_.front().node_count(); }

double GraphSequence::total_weight() const {
    double s = 0.0;
    for (const WeightedGraph& g : steps_) s += g.total_weight();
    return s;
}

WeightTransform WeightTransform::exp_div(double c) {
    if (c == 0.0 || !std::isfinite(c)) throw DataError("exp_div: divisor must be finite, nonzero");
    return {Kind::exp_div, c};
}

double WeightTransform::operator()(double w) const {
    switch (kind) {
        case Kind::identity: return w;
        case Kind::exp_div: return std::exp(w / divisor);
    }
    return w;
}

WeightedGraph transform_weights(const WeightedGraph& g, const WeightTransform& map) {
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) {
        e.weight = map(e.weight);
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw DataError("transform_weights: transform produced a negative or non-finite value");
    }
    return WeightedGraph(g.node_count(), std::move(edges), g.directed());
}

WeightedGraph bipartite_to_square(const BipartiteGraph& b) {
    const SparseMatrix bm = b.to_sparse();
    SparseMatrix prod = (bm * SparseMatrix(bm.transpose())).pruned();
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(prod.nonZeros()));
    for (int k = 0; k < prod.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(prod, k); it; ++it) {
            if (!std::isfinite(it.value()))
                throw NumericalError("bipartite_to_square: non-finite product entry");
            if (it.value() != 0.0)
                edges.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()),
                                 it.value()});
        }
    }
    return WeightedGraph(b.left_count(), std::move(edges), /*directed=*/false);
}

}  // namespace netshrink
