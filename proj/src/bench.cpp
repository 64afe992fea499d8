#include "netshrink/bench.hpp"

#include <chrono>
#include <cmath>

#include "netshrink/synthetic.hpp"

namespace netshrink {

std::vector<BenchRow> run_scaling_bench(const std::vector<std::int64_t>& edge_counts,
                                        const BenchOptions& opts) {
    std::vector<BenchRow> rows;
    rows.reserve(edge_counts.size());
    for (std::int64_t m : edge_counts) {
        const int n = static_cast<int>(std::max<std::int64_t>(m / 10, opts.rank + 2));
        const WeightedGraph g = random_graph(n, m, 0.5, 1.5, opts.seed);
        FwOptions fw;
        fw.rank = opts.rank;
        fw.iterations = opts.iterations;
        fw.grid = LineSearchGrid::log_spaced(1e-3, 1e-1, opts.grid_count);
        fw.early_stop_rel = 0.0;  // time full iterations
        fw.threads = opts.threads;
        const auto start = std::chrono::steady_clock::now();
        const InterventionResult r =
            frank_wolfe_static(g, BudgetSpec::fraction(opts.budget_frac), fw);
        const auto stop = std::chrono::steady_clock::now();
        BenchRow row;
        row.edges = m;
        row.nodes = n;
        row.iterations_timed = std::max(r.iterations_run, 1);
        row.seconds_per_iteration =
            std::chrono::duration<double>(stop - start).count() / row.iterations_timed;
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows) {
    const std::size_t k = rows.size();
    if (k < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const BenchRow& r : rows) {
        const double x = std::log(static_cast<double>(r.edges));
        const double y = std::log(std::max(r.seconds_per_iteration, 1e-12));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(k);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace netshrink
