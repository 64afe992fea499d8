#include "netshrink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

namespace netshrink {

BudgetSpec BudgetSpec::absolute(double b) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw DataError("budget: must be finite and >= 0");
    return BudgetSpec(Kind::absolute, b);
}

BudgetSpec BudgetSpec::fraction(double f) {
    if (!(f >= 0.0 && f <= 1.0)) throw DataError("budget: fraction must be in [0, 1]");
    return BudgetSpec(Kind::fraction, f);
}

double BudgetSpec::resolve(double total_weight) const {
    const double b = kind_ == Kind::fraction ? value_ * total_weight : value_;
    if (b > total_weight)
        throw DataError("budget " + std::to_string(b) + " exceeds total weight " +
                        std::to_string(total_weight));
    return b;
}

LineSearchGrid LineSearchGrid::log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi <= 1.0 && lo <= hi)) throw DataError("grid: need 0 < lo <= hi <= 1");
    if (count < 1) throw DataError("grid: need at least one value");
    std::vector<double> etas;
    etas.push_back(0.0);
    if (count == 1) {
        etas.push_back(lo);
    } else {
        const double llo = std::log10(lo), lhi = std::log10(hi);
        for (int i = 0; i < count; ++i)
            etas.push_back(std::pow(10.0, llo + (lhi - llo) * i / (count - 1)));
    }
    LineSearchGrid g;
    g.etas_ = std::move(etas);
    return g;
}

LineSearchGrid LineSearchGrid::from_values(std::vector<double> etas) {
    for (double e : etas)
        if (!(e >= 0.0 && e <= 1.0)) throw DataError("grid: step sizes must lie in [0, 1]");
    etas.push_back(0.0);
    std::sort(etas.begin(), etas.end());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
    LineSearchGrid g;
    g.etas_ = std::move(etas);
    return g;
}

const WeightedGraph& InterventionResult::reduced_graph() const {
    if (reduced.step_count() != 1)
        throw DataError("reduced_graph: result holds a multi-step sequence");
    return reduced.step(0);
}

namespace detail {

AlignedProblem::AlignedProblem(const GraphSequence& seq)
    : n_(seq.node_count()), s_(seq.step_count()) {
    step_begin_.push_back(0);
    for (int t = 0; t < s_; ++t) {
        const WeightedGraph& g = seq.step(t);
        directed_.push_back(g.directed());
        for (const Edge& e : g.edges()) {
            edges_.push_back(e);
            step_of_.push_back(t);
            ref_.push_back(e.weight);
        }
        step_begin_.push_back(edges_.size());
    }
    mats_.reserve(static_cast<std::size_t>(s_));
    slots_.resize(static_cast<std::size_t>(s_));
    for (int t = 0; t < s_; ++t) {
        mats_.push_back(seq.step(t).to_sparse());
        SparseMatrix& m = mats_.back();
        m.makeCompressed();
        // locate the storage slot of every edge (column-major, sorted rows)
        auto& slot = slots_[static_cast<std::size_t>(t)];
        const auto es = step_edges(t);
        slot.reserve(es.size());
        for (const Edge& e : es) {
            const auto* outer = m.outerIndexPtr();
            const auto* inner = m.innerIndexPtr();
            const auto lo = outer[e.dst], hi = outer[e.dst + 1];
            const auto* it = std::lower_bound(inner + lo, inner + hi, e.src);
            slot.push_back(it - inner);
        }
    }
}

AlignedProblem::AlignedProblem(const AlignedProblem& other) = default;

std::span<const Edge> AlignedProblem::step_edges(int t) const {
    const std::size_t b = step_begin_[static_cast<std::size_t>(t)];
    const std::size_t e = step_begin_[static_cast<std::size_t>(t) + 1];
    return {edges_.data() + b, e - b};
}

double AlignedProblem::weight_sum(const std::vector<double>& w) const {
    double s = 0.0;
    for (double x : w) s += x;
    return s;
}

double AlignedProblem::used(const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += ref_[i] - w[i];
    return s;
}

void AlignedProblem::set_weights(const std::vector<double>& w) {
    for (int t = 0; t < s_; ++t) {
        double* values = mats_[static_cast<std::size_t>(t)].valuePtr();
        const auto& slot = slots_[static_cast<std::size_t>(t)];
        const std::size_t base = step_begin_[static_cast<std::size_t>(t)];
        for (std::size_t k = 0; k < slot.size(); ++k)
            values[slot[k]] = w[base + k];
    }
}

SvdFactors AlignedProblem::factors(int rank, const SvdOptions& opts) const {
    if (s_ == 1) {
        const SparseOperator op(&mats_[0]);
        return truncated_svd(op, rank, opts);
    }
    std::vector<const SparseMatrix*> ptrs;
    for (const SparseMatrix& m : mats_) ptrs.push_back(&m);
    const ProductOperator op(std::move(ptrs));
    return truncated_svd(op, rank, opts);
}

std::vector<double> AlignedProblem::scores(const SvdFactors& f) const {
    if (s_ == 1) return scores_from_factors(f, step_edges(0));
    std::vector<const SparseMatrix*> ptrs;
    for (const SparseMatrix& m : mats_) ptrs.push_back(&m);
    const TvFactorVectors pv = tv_factor_vectors(f, ptrs);
    std::vector<double> out;
    out.reserve(edges_.size());
    for (int t = 0; t < s_; ++t) {
        const std::vector<double> st = tv_scores_for_step(f, pv, t, step_edges(t));
        out.insert(out.end(), st.begin(), st.end());
    }
    return out;
}

GraphSequence AlignedProblem::materialize(const std::vector<double>& w) const {
    std::vector<WeightedGraph> steps;
    steps.reserve(static_cast<std::size_t>(s_));
    for (int t = 0; t < s_; ++t) {
        const std::size_t base = step_begin_[static_cast<std::size_t>(t)];
        const auto es = step_edges(t);
        std::vector<Edge> edges;
        edges.reserve(es.size());
        for (std::size_t k = 0; k < es.size(); ++k)
            if (w[base + k] > 0.0)
                edges.push_back({es[k].src, es[k].dst, w[base + k]});
        steps.emplace_back(n_, std::move(edges), directed_[static_cast<std::size_t>(t)]);
    }
    return GraphSequence(std::move(steps));
}

std::pair<std::vector<double>, double> greedy_reduce(const AlignedProblem& p,
                                                     const std::vector<double>& weights,
                                                     const std::vector<double>& scores,
                                                     double budget) {
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    const auto& edges = p.edges();
    const auto& step_of = p.step_of();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (step_of[a] != step_of[b]) return step_of[a] < step_of[b];
        if (edges[a].src != edges[b].src) return edges[a].src < edges[b].src;
        return edges[a].dst < edges[b].dst;
    });
    std::vector<double> out = weights;
    double left = budget;
    double spent = 0.0;
    for (std::size_t idx : order) {
        if (scores[idx] <= 0.0) break;  // descending order: nothing useful follows
        if (left <= 0.0) break;
        const double w = out[idx];
        if (w <= 0.0) continue;
        if (left >= w * (1.0 - 1e-12)) {  // snap near-full reductions to exact zero
            out[idx] = 0.0;
            left -= w;
            spent += w;
        } else {
            out[idx] = w - left;
            spent += left;
            left = 0.0;
            break;
        }
    }
    return {std::move(out), spent};
}

InterventionResult make_result(const AlignedProblem& p, const std::vector<double>& final_w,
                               double budget, int rank) {
    InterventionResult r;
    r.reduced = p.materialize(final_w);
    r.budget = budget;
    r.budget_used = p.used(final_w);
    r.rank = rank;
    const auto& ref = p.ref_weights();
    for (std::size_t i = 0; i < final_w.size(); ++i) {
        const double amount = ref[i] - final_w[i];
        if (amount > 0.0)
            r.reductions.push_back(
                {p.step_of()[i], p.edges()[i].src, p.edges()[i].dst, amount});
    }
    return r;
}

namespace {

// Evaluates f((1-eta) m + eta g) for every positive grid point; results are
// indexed by grid position so the argmin is independent of evaluation order.
std::vector<double> line_search_values(const AlignedProblem& p, const std::vector<double>& m,
                                       const std::vector<double>& g,
                                       const std::vector<double>& etas, int rank,
                                       const SvdOptions& loose, int threads) {
    std::vector<double> values(etas.size(), std::numeric_limits<double>::infinity());
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int nt = threads > 0 ? threads : std::max(hw, 1);
    nt = std::min<int>(nt, static_cast<int>(etas.size()));
    auto run_block = [&](int first, int last, AlignedProblem& work) {
        std::vector<double> mix(m.size());
        for (int c = first; c < last; ++c) {
            const double eta = etas[static_cast<std::size_t>(c)];
            if (eta == 0.0) continue;
            for (std::size_t i = 0; i < m.size(); ++i)
                mix[i] = (1.0 - eta) * m[i] + eta * g[i];
            work.set_weights(mix);
            values[static_cast<std::size_t>(c)] = work.factors(rank, loose).objective();
        }
    };
    if (nt <= 1) {
        AlignedProblem work(p);
        run_block(0, static_cast<int>(etas.size()), work);
        return values;
    }
    std::vector<std::future<void>> futs;
    const int count = static_cast<int>(etas.size());
    const int chunk = (count + nt - 1) / nt;
    for (int b = 0; b < count; b += chunk) {
        const int e = std::min(b + chunk, count);
        futs.push_back(std::async(std::launch::async, [&, b, e]() {
            AlignedProblem work(p);
            run_block(b, e, work);
        }));
    }
    for (auto& f : futs) f.get();
    return values;
}

InterventionResult frank_wolfe_impl(const GraphSequence& seq, const BudgetSpec& budget,
                                    const FwOptions& opts) {
    if (opts.iterations < 1) throw DataError("frank_wolfe: iterations must be >= 1");
    AlignedProblem p(seq);
    const double total = p.weight_sum(p.ref_weights());
    const double B = budget.resolve(total);

    SvdOptions loose = opts.svd;
    loose.tol = std::max(opts.line_search_tol, opts.svd.tol);

    std::vector<double> m = p.ref_weights();
    p.set_weights(m);
    SvdFactors f = p.factors(opts.rank, opts.svd);
    double fcur = f.objective();
    bool degenerate = f.degenerate_gap;

    std::vector<double> trace{fcur};
    std::vector<double> steps;
    int iterations_run = 0;
    const auto& etas = opts.grid.values();

    for (int t = 0; t < opts.iterations; ++t) {
        iterations_run = t + 1;
        const std::vector<double> sc = p.scores(f);
        std::vector<double> g_star = greedy_reduce(p, p.ref_weights(), sc, B).first;
        if (g_star == m) {  // no feasible motion (e.g. B = 0); avoid ulp churn
            trace.push_back(fcur);
            steps.push_back(0.0);
            break;
        }

        const std::vector<double> cand =
            line_search_values(p, m, g_star, etas, opts.rank, loose, opts.threads);
        double best_f = fcur;
        double best_eta = 0.0;
        for (std::size_t c = 0; c < etas.size(); ++c) {
            if (etas[c] == 0.0) continue;
            if (cand[c] < best_f) {  // strict: ties resolve toward smaller eta
                best_f = cand[c];
                best_eta = etas[c];
            }
        }
        if (best_eta == 0.0) {
            trace.push_back(fcur);
            steps.push_back(0.0);
            break;
        }
        std::vector<double> m_next(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double mix = (1.0 - best_eta) * m[i] + best_eta * g_star[i];
            // rounding must not push an entry outside [0, W_ij]
            m_next[i] = std::clamp(mix, 0.0, p.ref_weights()[i]);
        }
        p.set_weights(m_next);
        SvdFactors f_next = p.factors(opts.rank, opts.svd);
        const double f_next_val = f_next.objective();
        if (f_next_val > fcur) {
            // the loose line search misjudged a sub-resolution step; reject it
            p.set_weights(m);
            trace.push_back(fcur);
            steps.push_back(0.0);
            break;
        }
        const double prev = fcur;
        m = std::move(m_next);
        f = std::move(f_next);
        fcur = f_next_val;
        degenerate = degenerate || f.degenerate_gap;
        trace.push_back(fcur);
        steps.push_back(best_eta);
        if (prev - fcur < opts.early_stop_rel * std::max(prev, 1e-300)) break;
    }

    // Mop-up: spend any remaining budget greedily, rescoring after each pass
    // (one pass can exhaust every positive-score edge and leave reducible
    // weight behind; iterating reaches the all-zero matrix at full budget).
    const std::vector<double> before_mop = m;
    const double f_before_mop = fcur;
    bool mopped = false;
    double left = B - p.used(m);
    long passes = static_cast<long>(p.edge_total()) + 2;
    while (left > 1e-12 * std::max(B, 1.0) && passes-- > 0) {
        p.set_weights(m);
        const SvdFactors fm = p.factors(opts.rank, opts.svd);
        degenerate = degenerate || fm.degenerate_gap;
        auto [m_next, spent] = greedy_reduce(p, m, p.scores(fm), left);
        if (spent <= 0.0) break;
        m = std::move(m_next);
        mopped = true;
        left = B - p.used(m);
    }
    if (mopped) {
        p.set_weights(m);
        const double f_final = p.factors(opts.rank, opts.svd).objective();
        if (f_final > f_before_mop) {
            m = before_mop;  // keep the trace non-increasing; budget stays unused
            trace.push_back(f_before_mop);
        } else {
            trace.push_back(f_final);
        }
    }

    InterventionResult result = make_result(p, m, B, opts.rank);
    result.objective_trace = std::move(trace);
    result.step_sizes = std::move(steps);
    result.iterations_run = iterations_run;
    result.degenerate_gap_seen = degenerate;
    return result;
}

}  // namespace

}  // namespace detail

WeightedGraph top_k_edge_centrality(const WeightedGraph& w_ref, double budget,
                                    const WeightedGraph& m_cur, int rank,
                                    const SvdOptions& opts) {
    if (w_ref.node_count() != m_cur.node_count())
        throw DataError("top_k_edge_centrality: node count mismatch");
    const SparseOperator op(m_cur);
    const SvdFactors f = truncated_svd(op, rank, opts);
    detail::AlignedProblem p{GraphSequence({w_ref})};
    const std::vector<double> sc = detail::scores_from_factors(f, p.edges());
    auto [w, spent] = detail::greedy_reduce(p, p.ref_weights(), sc, budget);
    return p.materialize(w).step(0);
}

GraphSequence top_k_timevarying(const GraphSequence& w_ref, double budget,
                                const GraphSequence& m_cur, int rank, const SvdOptions& opts) {
    if (w_ref.node_count() != m_cur.node_count() ||
        w_ref.step_count() != m_cur.step_count())
        throw DataError("top_k_timevarying: sequence shape mismatch");
    detail::AlignedProblem cur(m_cur);
    cur.set_weights(cur.ref_weights());
    const SvdFactors f = cur.factors(rank, opts);
    // scores of m_cur evaluated on w_ref's support
    detail::AlignedProblem ref(w_ref);
    std::vector<double> sc;
    if (w_ref.step_count() == 1) {
        sc = detail::scores_from_factors(f, ref.step_edges(0));
    } else {
        std::vector<SparseMatrix> mats;
        for (const WeightedGraph& g : m_cur.steps()) mats.push_back(g.to_sparse());
        std::vector<const SparseMatrix*> ptrs;
        for (const SparseMatrix& m : mats) ptrs.push_back(&m);
        const detail::TvFactorVectors pv = detail::tv_factor_vectors(f, ptrs);
        for (int t = 0; t < w_ref.step_count(); ++t) {
            const auto st = detail::tv_scores_for_step(f, pv, t, ref.step_edges(t));
            sc.insert(sc.end(), st.begin(), st.end());
        }
    }
    auto [w, spent] = detail::greedy_reduce(ref, ref.ref_weights(), sc, budget);
    return ref.materialize(w);
}

InterventionResult frank_wolfe_static(const WeightedGraph& g, const BudgetSpec& budget,
                                      const FwOptions& opts) {
    return detail::frank_wolfe_impl(GraphSequence({g}), budget, opts);
}

InterventionResult frank_wolfe_timevarying(const GraphSequence& seq, const BudgetSpec& budget,
                                           const FwOptions& opts) {
    return detail::frank_wolfe_impl(seq, budget, opts);
}

}  // namespace netshrink
