#include "netshrink/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "netshrink/rng.hpp"

namespace netshrink {

namespace {

// channel tags keep the per-(replica, epoch, node) draws independent
constexpr std::uint64_t kChanInfect = 0;
constexpr std::uint64_t kChanLeaveE = 1;
constexpr std::uint64_t kChanLeaveI = 2;
constexpr std::uint64_t kChanMetapop = 3;
constexpr std::uint64_t kChanSeeding = 0xfffffffeULL;

enum State : std::uint8_t { S = 0, E = 1, I = 2, R = 3 };

int seed_count(double p0, std::int64_t n) {
    // ceil with a tolerance for float dust in p0 * n
    const double x = p0 * static_cast<double>(n);
    return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

template <typename Fn>
void run_replicas(int replicas, int threads, Fn&& body) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int nt = threads > 0 ? threads : std::max(hw, 1);
    nt = std::min(nt, replicas);
    if (nt <= 1) {
        for (int r = 0; r < replicas; ++r) body(r);
        return;
    }
    std::vector<std::future<void>> futs;
    const int chunk = (replicas + nt - 1) / nt;
    for (int b = 0; b < replicas; b += chunk) {
        const int e = std::min(b + chunk, replicas);
        futs.push_back(std::async(std::launch::async, [&body, b, e]() {
            for (int r = b; r < e; ++r) body(r);
        }));
    }
    for (auto& f : futs) f.get();
}

ReplicaTrace simulate_graph_replica(const WeightedGraph& g, const EpidemicParams& p,
                                    int replica) {
    const int n = g.node_count();
    std::vector<std::uint8_t> state(static_cast<std::size_t>(n), S);
    std::vector<std::uint8_t> next(static_cast<std::size_t>(n));
    std::vector<bool> ever_left(static_cast<std::size_t>(n), false);

    // seed ceil(p0*n) distinct nodes chosen uniformly at random
    const int seeds = std::min<int>(seed_count(p.p0, n), n);
    {
        CounterRng rng(counter_hash(p.master_seed, static_cast<std::uint64_t>(replica),
                                    kChanSeeding));
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (int k = 0; k < seeds; ++k) {
            std::uniform_int_distribution<int> pick(k, n - 1);
            std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
            const int node = idx[static_cast<std::size_t>(k)];
            state[static_cast<std::size_t>(node)] = p.model == EpidemicModel::seir ? E : I;
            ever_left[static_cast<std::size_t>(node)] = true;
        }
    }

    ReplicaTrace trace;
    trace.counts.reserve(static_cast<std::size_t>(p.epochs) + 1);
    auto record = [&]() {
        std::array<std::int64_t, 4> c{0, 0, 0, 0};
        for (std::uint8_t s : state) ++c[s];
        trace.counts.push_back(c);
    };
    record();

    const double pr_leave_e = 1.0 / p.delta_e;
    const double pr_leave_i = 1.0 / p.delta_i;
    for (int epoch = 0; epoch < p.epochs; ++epoch) {
        next = state;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t key_base[2] = {static_cast<std::uint64_t>(replica),
                                               static_cast<std::uint64_t>(epoch)};
            switch (state[static_cast<std::size_t>(i)]) {
                case S: {
                    double keep = 1.0;
                    for (const Edge& e : g.out_edges(i)) {
                        if (state[static_cast<std::size_t>(e.dst)] == I)
                            keep *= std::max(1.0 - e.weight * p.beta_base, 0.0);
                        if (keep == 0.0) break;
                    }
                    const double p_inf = 1.0 - keep;
                    if (p_inf > 0.0) {
                        const double u = uniform01(counter_hash(
                            p.master_seed, key_base[0], key_base[1],
                            static_cast<std::uint64_t>(i), kChanInfect));
                        if (u < p_inf) {
                            next[static_cast<std::size_t>(i)] =
                                p.model == EpidemicModel::seir ? E : I;
                            ever_left[static_cast<std::size_t>(i)] = true;
                        }
                    }
                    break;
                }
                case E: {
                    const double u = uniform01(counter_hash(p.master_seed, key_base[0],
                                                            key_base[1],
                                                            static_cast<std::uint64_t>(i),
                                                            kChanLeaveE));
                    if (u < pr_leave_e) next[static_cast<std::size_t>(i)] = I;
                    break;
                }
                case I: {
                    const double u = uniform01(counter_hash(p.master_seed, key_base[0],
                                                            key_base[1],
                                                            static_cast<std::uint64_t>(i),
                                                            kChanLeaveI));
                    if (u < pr_leave_i)
                        next[static_cast<std::size_t>(i)] =
                            p.model == EpidemicModel::sis ? S : R;
                    break;
                }
                case R: break;
            }
        }
        state.swap(next);
        record();
    }
    std::int64_t infected = 0;
    for (bool b : ever_left) infected += b ? 1 : 0;
    trace.total_infected = infected;
    return trace;
}

}  // namespace

void EpidemicParams::validate() const {
    if (!(beta_base >= 0.0)) throw DataError("epidemic: beta_base must be >= 0");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw DataError("epidemic: p0 must be in [0, 1]");
    if (!(delta_e >= 1.0)) throw DataError("epidemic: delta_e must be >= 1");
    if (!(delta_i >= 1.0)) throw DataError("epidemic: delta_i must be >= 1");
    if (epochs < 1) throw DataError("epidemic: epochs must be >= 1");
    if (replicas < 1) throw DataError("epidemic: replicas must be >= 1");
}

double SimulationTrace::mean_total_infected() const {
    double s = 0.0;
    for (const ReplicaTrace& r : replicas) s += static_cast<double>(r.total_infected);
    return replicas.empty() ? 0.0 : s / static_cast<double>(replicas.size());
}

double SimulationTrace::stddev_total_infected() const {
    if (replicas.size() < 2) return 0.0;
    const double mean = mean_total_infected();
    double ss = 0.0;
    for (const ReplicaTrace& r : replicas) {
        const double d = static_cast<double>(r.total_infected) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(replicas.size() - 1));
}

SimulationTrace simulate_graph(const WeightedGraph& g, const EpidemicParams& params) {
    params.validate();
    if (params.model == EpidemicModel::metapop_seir)
        throw DataError("simulate_graph: metapop model needs simulate_metapop");
    SimulationTrace trace;
    trace.master_seed = params.master_seed;
    trace.replicas.resize(static_cast<std::size_t>(params.replicas));
    run_replicas(params.replicas, params.threads, [&](int r) {
        trace.replicas[static_cast<std::size_t>(r)] = simulate_graph_replica(g, params, r);
    });
    return trace;
}

namespace {

struct StepRates {
    std::vector<double> visits;  // V_p = column sums
};

ReplicaTrace simulate_metapop_replica(const std::vector<BipartiteGraph>& steps,
                                      const std::vector<StepRates>& rates,
                                      const MetapopParams& mp, int replica) {
    const EpidemicParams& p = mp.base;
    const int n_cbg = steps.front().left_count();
    const int n_poi = steps.front().right_count();
    const auto& pop = mp.cbg_populations;

    std::vector<std::int64_t> sc(pop.begin(), pop.end());
    std::vector<std::int64_t> ec(static_cast<std::size_t>(n_cbg), 0);
    std::vector<std::int64_t> ic(static_cast<std::size_t>(n_cbg), 0);
    std::vector<std::int64_t> rc(static_cast<std::size_t>(n_cbg), 0);

    // initial exposures: ceil(p0 * N_c) per group, same rule as the graph case
    for (int c = 0; c < n_cbg; ++c) {
        const std::int64_t seeds =
            std::min<std::int64_t>(seed_count(p.p0, pop[static_cast<std::size_t>(c)]),
                                   pop[static_cast<std::size_t>(c)]);
        ec[static_cast<std::size_t>(c)] = seeds;
        sc[static_cast<std::size_t>(c)] -= seeds;
    }

    ReplicaTrace trace;
    auto record = [&]() {
        std::array<std::int64_t, 4> c{0, 0, 0, 0};
        for (int i = 0; i < n_cbg; ++i) {
            c[0] += sc[static_cast<std::size_t>(i)];
            c[1] += ec[static_cast<std::size_t>(i)];
            c[2] += ic[static_cast<std::size_t>(i)];
            c[3] += rc[static_cast<std::size_t>(i)];
        }
        trace.counts.push_back(c);
    };
    record();

    const int s = static_cast<int>(steps.size());
    std::vector<double> poi_infectious(static_cast<std::size_t>(n_poi));
    std::vector<double> poi_rate(static_cast<std::size_t>(n_poi));
    for (int epoch = 0; epoch < p.epochs; ++epoch) {
        const int step = std::min<int>(
            static_cast<int>((static_cast<std::int64_t>(epoch) * s) / p.epochs), s - 1);
        const BipartiteGraph& g = steps[static_cast<std::size_t>(step)];
        const StepRates& sr = rates[static_cast<std::size_t>(step)];

        // I_p = sum_c (I_c / N_c) W_cp
        std::fill(poi_infectious.begin(), poi_infectious.end(), 0.0);
        for (int c = 0; c < n_cbg; ++c) {
            if (ic[static_cast<std::size_t>(c)] == 0) continue;
            const double frac = static_cast<double>(ic[static_cast<std::size_t>(c)]) /
                                static_cast<double>(pop[static_cast<std::size_t>(c)]);
            for (const Edge& e : g.row_edges(c))
                poi_infectious[static_cast<std::size_t>(e.dst)] += frac * e.weight;
        }
        // lambda_p = beta_p * I_p / V_p with beta_p = psi d_p^2 V_p / a_p
        for (int q = 0; q < n_poi; ++q) {
            const double vp = sr.visits[static_cast<std::size_t>(q)];
            if (vp <= 0.0) {
                poi_rate[static_cast<std::size_t>(q)] = 0.0;
                continue;
            }
            const double beta_p = mp.psi * mp.poi_dwell[static_cast<std::size_t>(q)] *
                                  mp.poi_dwell[static_cast<std::size_t>(q)] * vp /
                                  mp.poi_areas[static_cast<std::size_t>(q)];
            poi_rate[static_cast<std::size_t>(q)] =
                beta_p * poi_infectious[static_cast<std::size_t>(q)] / vp;
        }

        for (int c = 0; c < n_cbg; ++c) {
            const std::int64_t n_c = pop[static_cast<std::size_t>(c)];
            const std::int64_t s_c = sc[static_cast<std::size_t>(c)];
            const std::int64_t e_c = ec[static_cast<std::size_t>(c)];
            const std::int64_t i_c = ic[static_cast<std::size_t>(c)];
            CounterRng rng(counter_hash(p.master_seed, static_cast<std::uint64_t>(replica),
                                        static_cast<std::uint64_t>(epoch),
                                        static_cast<std::uint64_t>(c), kChanMetapop));
            // POI exposure: Pois((S_c/N_c) * sum_p lambda_p W_cp)
            double lambda_agg = 0.0;
            for (const Edge& e : g.row_edges(c))
                lambda_agg += poi_rate[static_cast<std::size_t>(e.dst)] * e.weight;
            std::int64_t n_se = 0;
            if (s_c > 0) {
                const double pois_mean =
                    (static_cast<double>(s_c) / static_cast<double>(n_c)) * lambda_agg;
                if (pois_mean > 0.0) {
                    std::poisson_distribution<std::int64_t> d(pois_mean);
                    n_se += d(rng);
                }
                // within-group exposure: Binom(S_c, beta * I_c / N_c)
                const double lambda_c = std::clamp(
                    p.beta_base * static_cast<double>(i_c) / static_cast<double>(n_c), 0.0,
                    1.0);
                if (lambda_c > 0.0) {
                    std::binomial_distribution<std::int64_t> d(s_c, lambda_c);
                    n_se += d(rng);
                }
                n_se = std::min(n_se, s_c);
            }
            std::int64_t n_ei = 0;
            if (e_c > 0) {
                std::binomial_distribution<std::int64_t> d(e_c, 1.0 / p.delta_e);
                n_ei = std::min(d(rng), e_c);
            }
            std::int64_t n_ir = 0;
            if (i_c > 0) {
                std::binomial_distribution<std::int64_t> d(i_c, 1.0 / p.delta_i);
                n_ir = std::min(d(rng), i_c);
            }
            sc[static_cast<std::size_t>(c)] = s_c - n_se;
            ec[static_cast<std::size_t>(c)] = e_c + n_se - n_ei;
            ic[static_cast<std::size_t>(c)] = i_c + n_ei - n_ir;
            rc[static_cast<std::size_t>(c)] += n_ir;
        }
        record();
    }
    std::int64_t total_pop = 0;
    for (std::int64_t n_c : pop) total_pop += n_c;
    trace.total_infected = total_pop - [&]() {
        std::int64_t s_sum = 0;
        for (std::int64_t x : sc) s_sum += x;
        return s_sum;
    }();
    return trace;
}

}  // namespace

SimulationTrace simulate_metapop(const std::vector<BipartiteGraph>& steps,
                                 const MetapopParams& params) {
    params.base.validate();
    if (steps.empty()) throw DataError("simulate_metapop: no graphs");
    const int n_cbg = steps.front().left_count();
    const int n_poi = steps.front().right_count();
    for (const BipartiteGraph& g : steps)
        if (g.left_count() != n_cbg || g.right_count() != n_poi)
            throw DataError("simulate_metapop: step shapes differ");
    if (static_cast<int>(params.cbg_populations.size()) != n_cbg)
        throw DataError("simulate_metapop: need one population per group");
    if (static_cast<int>(params.poi_areas.size()) != n_poi ||
        static_cast<int>(params.poi_dwell.size()) != n_poi)
        throw DataError("simulate_metapop: need area and dwell time per location");
    for (double a : params.poi_areas)
        if (!(a > 0.0)) throw DataError("simulate_metapop: areas must be > 0");
    for (std::int64_t n : params.cbg_populations)
        if (n < 1) throw DataError("simulate_metapop: populations must be >= 1");

    std::vector<StepRates> rates(steps.size());
    for (std::size_t t = 0; t < steps.size(); ++t) {
        rates[t].visits.assign(static_cast<std::size_t>(n_poi), 0.0);
        for (const Edge& e : steps[t].edges())
            rates[t].visits[static_cast<std::size_t>(e.dst)] += e.weight;
    }

    SimulationTrace trace;
    trace.master_seed = params.base.master_seed;
    trace.replicas.resize(static_cast<std::size_t>(params.base.replicas));
    run_replicas(params.base.replicas, params.base.threads, [&](int r) {
        trace.replicas[static_cast<std::size_t>(r)] =
            simulate_metapop_replica(steps, rates, params, r);
    });
    return trace;
}

SimulationTrace simulate_metapop(const BipartiteGraph& b, const MetapopParams& params) {
    return simulate_metapop(std::vector<BipartiteGraph>{b}, params);
}

std::vector<ScaleSweepRow> sweep_lambda_scaling(const WeightedGraph& g,
                                                const EpidemicParams& params,
                                                const std::vector<double>& scales,
                                                const SvdOptions& svd_opts) {
    std::vector<ScaleSweepRow> rows;
    rows.reserve(scales.size());
    for (double c : scales) {
        const WeightedGraph scaled = g.scaled(c);
        ScaleSweepRow row;
        row.scale = c;
        if (scaled.edge_count() > 0) {
            const SparseOperator op(scaled);
            row.lambda1 = truncated_svd(op, 1, svd_opts).singular_values[0];
        }
        const SimulationTrace trace = simulate_graph(scaled, params);
        row.mean_infected = trace.mean_total_infected();
        row.stddev_infected = trace.stddev_total_infected();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace netshrink
