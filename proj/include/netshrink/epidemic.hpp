#ifndef NETSHRINK_EPIDEMIC_HPP
#define NETSHRINK_EPIDEMIC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "netshrink/graph.hpp"
#include "netshrink/svd.hpp"

namespace netshrink {

enum class EpidemicModel { seir, sir, sis, metapop_seir };

struct EpidemicParams {
    EpidemicModel model = EpidemicModel::seir;
    double beta_base = 0.05;  // transmission rate
    double p0 = 0.01;         // initially exposed/infected fraction
    double delta_e = 4.0;     // mean latency period (epochs)
    double delta_i = 5.0;     // mean infectious period (epochs)
    int epochs = 50;
    int replicas = 50;
    std::uint64_t master_seed = 1;
    int threads = 0;

    void validate() const;
};

struct MetapopParams {
    EpidemicParams base;
    double psi = 1.0;                       // POI transmission constant
    std::vector<double> poi_areas;          // a_p > 0
    std::vector<double> poi_dwell;          // d_p
    std::vector<std::int64_t> cbg_populations;  // N_c >= 1
};

struct ReplicaTrace {
    // counts[t] = {S, E, I, R} after epoch t; counts[0] is the initial state
    std::vector<std::array<std::int64_t, 4>> counts;
    std::int64_t total_infected = 0;  // individuals that ever left S
};

struct SimulationTrace {
    std::vector<ReplicaTrace> replicas;
    std::uint64_t master_seed = 0;

    double mean_total_infected() const;
    double stddev_total_infected() const;
};

// Discrete-time stochastic simulation on a weighted directed graph with
// synchronous updates. Node i's per-epoch infection probability is
//   p_i = 1 - prod over out-edges (i,j) with j infectious of max(1 - W_ij * beta, 0).
// All randomness comes from counter streams keyed by
// (master_seed, replica, epoch, node), so traces are independent of replica
// execution order and thread count.
SimulationTrace simulate_graph(const WeightedGraph& g, const EpidemicParams& params);

// Metapopulation model: one S/E/I/R compartment set per group (row), coupled
// through visit weights to locations (columns). For a sequence, epochs map to
// steps in contiguous equal blocks. Sampled transitions are capped at the
// source compartment so counts stay nonnegative.
SimulationTrace simulate_metapop(const std::vector<BipartiteGraph>& steps,
                                 const MetapopParams& params);
SimulationTrace simulate_metapop(const BipartiteGraph& b, const MetapopParams& params);

struct ScaleSweepRow {
    double scale = 1.0;
    double lambda1 = 0.0;
    double mean_infected = 0.0;
    double stddev_infected = 0.0;
};

// Simulates on c*W for each scale c and records the infection counts next to
// the top singular value of the scaled graph.
std::vector<ScaleSweepRow> sweep_lambda_scaling(const WeightedGraph& g,
                                                const EpidemicParams& params,
                                                const std::vector<double>& scales,
                                                const SvdOptions& svd_opts = {});

}  // namespace netshrink

#endif
