#include "netshrink/centrality.hpp"

#include <algorithm>

namespace netshrink {

void EdgeScoreList::sort_descending() {
    std::sort(entries.begin(), entries.end(), [](const EdgeScore& a, const EdgeScore& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.step != b.step) return a.step < b.step;
        if (a.src != b.src) return a.src < b.src;
        return a.dst < b.dst;
    });
    sorted_descending = true;
}

namespace detail {

std::vector<double> scores_from_factors(const SvdFactors& f, std::span<const Edge> edges) {
    std::vector<double> scores;
    scores.reserve(edges.size());
    for (const Edge& e : edges) {
        double s = 0.0;
        for (int k = 0; k < f.rank; ++k)
            s += f.singular_values[k] * f.left_vectors(e.src, k) * f.right_vectors(e.dst, k);
        scores.push_back(2.0 * s);
    }
    return scores;
}

TvFactorVectors tv_factor_vectors(const SvdFactors& f,
                                  const std::vector<const SparseMatrix*>& steps) {
    const int s = static_cast<int>(steps.size());
    TvFactorVectors pv;
    pv.left.resize(static_cast<std::size_t>(s));
    pv.right.resize(static_cast<std::size_t>(s));
    // left(0) = U; left(t) = M^(t-1)^T left(t-1)
    pv.left[0] = f.left_vectors;
    for (int t = 1; t < s; ++t)
        pv.left[static_cast<std::size_t>(t)] =
            steps[static_cast<std::size_t>(t - 1)]->transpose() *
            pv.left[static_cast<std::size_t>(t - 1)];
    // right(s-1) = V; right(t) = M^(t+1) right(t+1)
    pv.right[static_cast<std::size_t>(s - 1)] = f.right_vectors;
    for (int t = s - 2; t >= 0; --t)
        pv.right[static_cast<std::size_t>(t)] =
            *steps[static_cast<std::size_t>(t + 1)] * pv.right[static_cast<std::size_t>(t + 1)];
    return pv;
}

std::vector<double> tv_scores_for_step(const SvdFactors& f, const TvFactorVectors& pv, int t,
                                       std::span<const Edge> edges) {
    const Eigen::MatrixXd& L = pv.left[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd& R = pv.right[static_cast<std::size_t>(t)];
    std::vector<double> scores;
    scores.reserve(edges.size());
    for (const Edge& e : edges) {
        double s = 0.0;
        for (int k = 0; k < f.rank; ++k)
            s += f.singular_values[k] * L(e.src, k) * R(e.dst, k);
        scores.push_back(2.0 * s);
    }
    return scores;
}

}  // namespace detail

EdgeScoreList static_scores(const WeightedGraph& g, int rank, const SvdOptions& opts) {
    if (g.edge_count() == 0) throw DataError("static_scores: graph has no edges");
    const SparseOperator op(g);
    const SvdFactors f = truncated_svd(op, rank, opts);
    const std::vector<double> s = detail::scores_from_factors(f, g.edges());
    EdgeScoreList out;
    out.degenerate_gap = f.degenerate_gap;
    out.entries.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        out.entries.push_back({0, g.edges()[k].src, g.edges()[k].dst, s[k]});
    return out;
}

EdgeScoreList timevarying_scores(const GraphSequence& seq, int rank, const SvdOptions& opts) {
    if (seq.step_count() == 1) {
        EdgeScoreList out = static_scores(seq.step(0), rank, opts);
        return out;
    }
    std::vector<SparseMatrix> mats;
    mats.reserve(static_cast<std::size_t>(seq.step_count()));
    for (const WeightedGraph& g : seq.steps()) mats.push_back(g.to_sparse());
    std::vector<const SparseMatrix*> ptrs;
    for (const SparseMatrix& m : mats) ptrs.push_back(&m);
    const ProductOperator op(ptrs);
    const SvdFactors f = truncated_svd(op, rank, opts);
    const detail::TvFactorVectors pv = detail::tv_factor_vectors(f, ptrs);
    EdgeScoreList out;
    out.degenerate_gap = f.degenerate_gap;
    for (int t = 0; t < seq.step_count(); ++t) {
        const auto& edges = seq.step(t).edges();
        const std::vector<double> s = detail::tv_scores_for_step(f, pv, t, edges);
        for (std::size_t k = 0; k < s.size(); ++k)
            out.entries.push_back({t, edges[k].src, edges[k].dst, s[k]});
    }
    return out;
}

}  // namespace netshrink
