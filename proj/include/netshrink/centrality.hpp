#ifndef NETSHRINK_CENTRALITY_HPP
#define NETSHRINK_CENTRALITY_HPP

#include <vector>

#include "netshrink/graph.hpp"
#include "netshrink/svd.hpp"

namespace netshrink {

struct EdgeScore {
    int step = 0;  // time step; 0 for static graphs
    int src = 0;
    int dst = 0;
    double score = 0.0;
};

// One entry per support edge. The score of edge (t,i,j) is the partial
// derivative of the objective with respect to that weight.
struct EdgeScoreList {
    std::vector<EdgeScore> entries;
    bool sorted_descending = false;
    bool degenerate_gap = false;  // warning channel: tied spectrum at the cut

    // Non-increasing by score; ties broken by (step, src, dst).
    void sort_descending();
};

// score(i,j) = 2 * sum_k s_k u_k(i) v_k(j), evaluated on support edges only.
EdgeScoreList static_scores(const WeightedGraph& g, int rank, const SvdOptions& opts = {});

// Scores of every step's support edges against the rank-r factors of the
// ordered product of the sequence; evaluated through prefix/suffix products
// applied to the factor vectors, never materializing n x n products.
EdgeScoreList timevarying_scores(const GraphSequence& seq, int rank,
                                 const SvdOptions& opts = {});

namespace detail {

// Static gradient on an explicit edge set from precomputed factors.
std::vector<double> scores_from_factors(const SvdFactors& f, std::span<const Edge> edges);

// Per step t: left(t) = (M^(1)...M^(t-1))^T U_r and right(t) = (M^(t+1)...M^(s)) V_r.
// The step-t score of edge (i,j) is 2 * sum_k s_k left(t)(i,k) right(t)(j,k).
struct TvFactorVectors {
    std::vector<Eigen::MatrixXd> left;
    std::vector<Eigen::MatrixXd> right;
};
TvFactorVectors tv_factor_vectors(const SvdFactors& f,
                                  const std::vector<const SparseMatrix*>& steps);

std::vector<double> tv_scores_for_step(const SvdFactors& f, const TvFactorVectors& pv, int t,
                                       std::span<const Edge> edges);

}  // namespace detail

}  // namespace netshrink

#endif
