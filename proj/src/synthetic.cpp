#include "netshrink/synthetic.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

namespace netshrink {

namespace {

std::vector<Edge> random_support(int n, std::int64_t m, std::mt19937_64& rng) {
    if (m > static_cast<std::int64_t>(n) * n)
        throw DataError("synthetic graph: more edges than node pairs");
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    while (static_cast<std::int64_t>(edges.size()) < m) {
        const int i = pick(rng);
        const int j = pick(rng);
        const std::int64_t key = static_cast<std::int64_t>(i) * n + j;
        if (seen.insert(key).second) edges.push_back({i, j, 1.0});
    }
    return edges;
}

}  // namespace

WeightedGraph random_graph(int node_count, std::int64_t edge_count, double w_min, double w_max,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges = random_support(node_count, edge_count, rng);
    std::uniform_real_distribution<double> weight(w_min, w_max);
    for (Edge& e : edges) e.weight = weight(rng);
    return WeightedGraph(node_count, std::move(edges));
}

WeightedGraph heavy_tailed_graph(int node_count, std::int64_t edge_count, double alpha,
                                 double w_min, double cap, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges = random_support(node_count, edge_count, rng);
    std::uniform_real_distribution<double> unit(std::numeric_limits<double>::min(), 1.0);
    for (Edge& e : edges)
        e.weight = std::min(w_min * std::pow(unit(rng), -1.0 / alpha), cap);
    return WeightedGraph(node_count, std::move(edges));
}

}  // namespace netshrink
