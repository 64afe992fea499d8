#ifndef NETSHRINK_BENCH_HPP
#define NETSHRINK_BENCH_HPP

#include <cstdint>
#include <vector>

#include "netshrink/optimizer.hpp"

namespace netshrink {

struct BenchRow {
    std::int64_t edges = 0;
    int nodes = 0;
    double seconds_per_iteration = 0.0;
    int iterations_timed = 0;
};

struct BenchOptions {
    int rank = 10;
    int iterations = 3;
    int grid_count = 8;       // smaller grid keeps the timing loop honest but short
    double budget_frac = 0.05;
    std::uint64_t seed = 7;
    int threads = 0;
};

// Generates a synthetic graph per edge count (nodes = edges / 10) and times
// the optimizer's main loop; rows feed a log-log slope analysis.
std::vector<BenchRow> run_scaling_bench(const std::vector<std::int64_t>& edge_counts,
                                        const BenchOptions& opts = {});

// Least-squares slope of log(seconds) against log(edges).
double loglog_slope(const std::vector<BenchRow>& rows);

}  // namespace netshrink

#endif
