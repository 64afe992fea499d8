#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <netshrink/centrality.hpp>
#include <netshrink/synthetic.hpp>

#include "support/oracles.hpp"

using namespace netshrink;

namespace {

// smallest consecutive gap among the top r+1 singular values, relative to s_1
double top_gap(const Eigen::MatrixXd& m, int r) {
    const Eigen::VectorXd s = oracles::dense_singular_values(m);
    double g = std::numeric_limits<double>::infinity();
    for (int k = 0; k < r && k + 1 < s.size(); ++k) g = std::min(g, s[k] - s[k + 1]);
    return g / std::max(s[0], 1e-30);
}

WeightedGraph gapped_random_graph(int n, std::int64_t m, int r, std::uint64_t& seed) {
    for (;; ++seed) {
        WeightedGraph g = random_graph(n, m, 0.5, 1.5, seed);
        if (top_gap(oracles::dense_from(g), r) > 1e-3) return g;
    }
}

double score_of(const EdgeScoreList& list, int step, int src, int dst) {
    for (const EdgeScore& e : list.entries)
        if (e.step == step && e.src == src && e.dst == dst) return e.score;
    FAIL("edge not found in score list");
    return 0.0;
}

GraphSequence random_sequence(int s, int n, std::int64_t m, std::uint64_t seed) {
    std::vector<WeightedGraph> steps;
    for (int t = 0; t < s; ++t) steps.push_back(random_graph(n, m, 0.5, 1.5, seed + 100 * t));
    return GraphSequence(std::move(steps));
}

}  // namespace

TEST_CASE("static score closed forms") {
    SUBCASE("one effective entry") {
        const WeightedGraph g(2, {{0, 0, 2.0}});
        const EdgeScoreList s = static_scores(g, 1);
        CHECK(s.entries.size() == 1);
        CHECK(s.entries[0].score == doctest::Approx(4.0).epsilon(1e-10));
    }
    SUBCASE("diagonal") {
        const WeightedGraph g(2, {{0, 0, 3.0}, {1, 1, 2.0}});
        const EdgeScoreList s = static_scores(g, 2);
        CHECK(score_of(s, 0, 0, 0) == doctest::Approx(6.0).epsilon(1e-10));
        CHECK(score_of(s, 0, 1, 1) == doctest::Approx(4.0).epsilon(1e-10));
    }
}

TEST_CASE("static scores are the gradient (finite differences)") {
    std::uint64_t seed = 1;
    for (int trial = 0; trial < 4; ++trial) {
        const int r = 1 + trial % 3;
        const WeightedGraph g = gapped_random_graph(30, 90, r, seed);
        ++seed;
        const Eigen::MatrixXd dense = oracles::dense_from(g);
        const EdgeScoreList scores = static_scores(g, r);
        for (const EdgeScore& e : scores.entries) {
            const double fd = oracles::fd_score(dense, e.src, e.dst, r);
            CHECK(std::abs(e.score - fd) <= 1e-4 * (1.0 + std::abs(e.score)));
        }
    }
}

TEST_CASE("rank-1 scores scale linearly with the matrix") {
    std::uint64_t seed = 10;
    const WeightedGraph g = gapped_random_graph(20, 60, 1, seed);
    const WeightedGraph g2 = g.scaled(2.5);
    const EdgeScoreList a = static_scores(g, 1);
    const EdgeScoreList b = static_scores(g2, 1);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(b.entries[i].score ==
              doctest::Approx(2.5 * a.entries[i].score).epsilon(1e-8));
}

TEST_CASE("time-varying scores") {
    SUBCASE("s=1 equals static exactly") {
        const WeightedGraph g = random_graph(12, 50, 0.5, 1.5, 3);
        const EdgeScoreList a = static_scores(g, 2);
        const EdgeScoreList b = timevarying_scores(GraphSequence({g}), 2);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i)
            CHECK(a.entries[i].score == b.entries[i].score);
    }
    SUBCASE("identity second step leaves step-1 scores unchanged") {
        const WeightedGraph g = random_graph(10, 40, 0.5, 1.5, 4);
        std::vector<Edge> eye;
        for (int i = 0; i < 10; ++i) eye.push_back({i, i, 1.0});
        const GraphSequence seq({g, WeightedGraph(10, eye)});
        const EdgeScoreList a = static_scores(g, 2);
        const EdgeScoreList b = timevarying_scores(seq, 2);
        for (const EdgeScore& e : a.entries)
            CHECK(score_of(b, 0, e.src, e.dst) == doctest::Approx(e.score).epsilon(1e-12));
    }
    SUBCASE("finite differences on the product objective") {
        for (int s : {2, 3}) {
            const GraphSequence seq = random_sequence(s, 8, 20, 50 + s);
            const int r = 2;
            std::vector<Eigen::MatrixXd> dense;
            for (const WeightedGraph& g : seq.steps()) dense.push_back(oracles::dense_from(g));
            const EdgeScoreList scores = timevarying_scores(seq, r);
            for (const EdgeScore& e : scores.entries) {
                const double step = 1e-5;
                auto f_at = [&](double delta) {
                    std::vector<Eigen::MatrixXd> mats = dense;
                    mats[static_cast<std::size_t>(e.step)](e.src, e.dst) += delta;
                    Eigen::MatrixXd prod = mats[0];
                    for (int t = 1; t < s; ++t) prod = prod * mats[static_cast<std::size_t>(t)];
                    return oracles::dense_objective(prod, r);
                };
                const double fd = (f_at(step) - f_at(-step)) / (2.0 * step);
                CHECK(std::abs(e.score - fd) <= 1e-4 * (1.0 + std::abs(e.score)));
            }
        }
    }
    SUBCASE("matches the dense indicator-product identity") {
        const GraphSequence seq = random_sequence(3, 6, 12, 77);
        const int r = 2;
        std::vector<Eigen::MatrixXd> dense;
        for (const WeightedGraph& g : seq.steps()) dense.push_back(oracles::dense_from(g));
        const ProductOperator op(seq);
        const SvdFactors f = truncated_svd(op, r);
        const Eigen::MatrixXd xr = low_rank_reconstruct(f).dense();
        const EdgeScoreList scores = timevarying_scores(seq, r);
        for (const EdgeScore& e : scores.entries) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Identity(6, 6);
            for (int t = 0; t < e.step; ++t) a = a * dense[static_cast<std::size_t>(t)];
            Eigen::MatrixXd b = Eigen::MatrixXd::Identity(6, 6);
            for (int t = e.step + 1; t < 3; ++t) b = b * dense[static_cast<std::size_t>(t)];
            // 2 <X_r, A J^{ij} B> = 2 sum_pq X_r(p,q) A(p,i) B(j,q)
            double direct = 0.0;
            for (int p = 0; p < 6; ++p)
                for (int q = 0; q < 6; ++q) direct += xr(p, q) * a(p, e.src) * b(e.dst, q);
            direct *= 2.0;
            CHECK(e.score == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("score list sorting and tie-break") {
    EdgeScoreList list;
    list.entries = {{1, 0, 0, 2.0}, {0, 1, 0, 2.0}, {0, 0, 1, 5.0}, {0, 0, 2, -1.0}};
    list.sort_descending();
    CHECK(list.sorted_descending);
    CHECK(list.entries[0].score == 5.0);
    CHECK(list.entries[1].step == 0);  // tie at 2.0 resolved by (t, i, j)
    CHECK(list.entries[2].step == 1);
    CHECK(list.entries[3].score == -1.0);
}

TEST_CASE("every support edge is scored exactly once") {
    const WeightedGraph g = random_graph(15, 45, 0.5, 1.5, 8);
    const EdgeScoreList s = static_scores(g, 2);
    CHECK(s.entries.size() == static_cast<std::size_t>(g.edge_count()));
    const GraphSequence seq = random_sequence(2, 15, 45, 9);
    const EdgeScoreList tv = timevarying_scores(seq, 2);
    CHECK(tv.entries.size() ==
          static_cast<std::size_t>(seq.step(0).edge_count() + seq.step(1).edge_count()));
}
