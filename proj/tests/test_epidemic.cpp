#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <netshrink/epidemic.hpp>
#include <netshrink/synthetic.hpp>

using namespace netshrink;

namespace {

EpidemicParams quick_params(EpidemicModel model) {
    EpidemicParams p;
    p.model = model;
    p.beta_base = 0.05;
    p.p0 = 0.05;
    p.epochs = 20;
    p.replicas = 10;
    p.master_seed = 99;
    return p;
}

}  // namespace

TEST_CASE("zero transmission keeps infections at the seeds") {
    const WeightedGraph g = random_graph(100, 400, 0.5, 1.5, 1);
    EpidemicParams p = quick_params(EpidemicModel::seir);
    p.beta_base = 0.0;
    p.p0 = 0.01;
    const SimulationTrace t = simulate_graph(g, p);
    for (const ReplicaTrace& r : t.replicas) CHECK(r.total_infected == 1);  // ceil(0.01*100)
}

TEST_CASE("clamped infection probability is one") {
    // edge weight * beta >= 1 forces infection of the susceptible endpoint
    const WeightedGraph g(2, {{0, 1, 25.0}, {1, 0, 25.0}});
    EpidemicParams p = quick_params(EpidemicModel::sir);
    p.beta_base = 0.05;  // 25 * 0.05 = 1.25, clamped
    p.p0 = 0.5;          // exactly one seed
    p.epochs = 1;
    p.replicas = 200;
    const SimulationTrace t = simulate_graph(g, p);
    for (const ReplicaTrace& r : t.replicas) CHECK(r.total_infected == 2);
}

TEST_CASE("conservation of compartment counts") {
    const WeightedGraph g = random_graph(80, 320, 0.5, 2.0, 3);
    for (EpidemicModel m : {EpidemicModel::seir, EpidemicModel::sir, EpidemicModel::sis}) {
        const SimulationTrace t = simulate_graph(g, quick_params(m));
        for (const ReplicaTrace& r : t.replicas)
            for (const auto& c : r.counts) CHECK(c[0] + c[1] + c[2] + c[3] == 80);
    }
}

TEST_CASE("traces are deterministic and independent of thread count") {
    const WeightedGraph g = random_graph(60, 240, 0.5, 1.5, 4);
    EpidemicParams a = quick_params(EpidemicModel::seir);
    a.threads = 1;
    EpidemicParams b = a;
    b.threads = 4;
    const SimulationTrace ta = simulate_graph(g, a);
    const SimulationTrace tb = simulate_graph(g, b);
    REQUIRE(ta.replicas.size() == tb.replicas.size());
    for (std::size_t r = 0; r < ta.replicas.size(); ++r) {
        CHECK(ta.replicas[r].counts == tb.replicas[r].counts);
        CHECK(ta.replicas[r].total_infected == tb.replicas[r].total_infected);
    }
}

TEST_CASE("sis nodes return to susceptible") {
    const WeightedGraph g = random_graph(50, 100, 0.5, 1.5, 5);
    EpidemicParams p = quick_params(EpidemicModel::sis);
    p.beta_base = 0.0;
    p.delta_i = 1.0;  // guaranteed recovery every epoch
    p.p0 = 0.2;
    p.epochs = 2;
    const SimulationTrace t = simulate_graph(g, p);
    for (const ReplicaTrace& r : t.replicas) {
        CHECK(r.counts[0][2] == 10);  // seeds start infectious
        CHECK(r.counts[1][2] == 0);   // all back to S after one epoch
        CHECK(r.counts[1][0] == 50);
    }
}

TEST_CASE("total infected is non-decreasing over epochs") {
    const WeightedGraph g = random_graph(80, 400, 0.5, 2.0, 6);
    EpidemicParams p = quick_params(EpidemicModel::seir);
    p.beta_base = 0.08;
    const SimulationTrace t = simulate_graph(g, p);
    for (const ReplicaTrace& r : t.replicas) {
        std::int64_t prev = 0;
        for (const auto& c : r.counts) {
            const std::int64_t left_s = 80 - c[0];
            CHECK(left_s >= prev);
            prev = left_s;
        }
    }
}

TEST_CASE("adding an infectious neighbor never lowers the hazard") {
    // direct evaluation of the product form
    auto hazard = [](const std::vector<double>& weights, double beta) {
        double keep = 1.0;
        for (double w : weights) keep *= std::max(1.0 - w * beta, 0.0);
        return 1.0 - keep;
    };
    const double base = hazard({0.5, 1.0}, 0.05);
    CHECK(hazard({0.5, 1.0, 0.7}, 0.05) >= base);
    CHECK(hazard({0.5, 1.0, 30.0}, 0.05) == 1.0);
}

TEST_CASE("binomial sanity at one epoch") {
    // one infectious node, one susceptible, w * beta = 0.05; the empirical
    // infection rate over replicas must sit inside a 3-sigma band
    const WeightedGraph g(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    EpidemicParams p = quick_params(EpidemicModel::sir);
    p.beta_base = 0.05;
    p.p0 = 0.5;
    p.epochs = 1;
    p.replicas = 20000;
    const SimulationTrace t = simulate_graph(g, p);
    std::int64_t infected = 0;
    for (const ReplicaTrace& r : t.replicas) infected += r.total_infected - 1;
    const double rate = static_cast<double>(infected) / p.replicas;
    const double sigma = std::sqrt(0.05 * 0.95 / p.replicas);
    CHECK(std::abs(rate - 0.05) <= 3.0 * sigma);
}

TEST_CASE("metapop guards and trivial cases") {
    const BipartiteGraph b(2, 1, {{0, 0, 5.0}, {1, 0, 3.0}});
    MetapopParams mp;
    mp.base = quick_params(EpidemicModel::metapop_seir);
    mp.base.epochs = 10;
    mp.psi = 1.0;
    mp.poi_areas = {100.0};
    mp.poi_dwell = {1.0};
    mp.cbg_populations = {50, 30};
    SUBCASE("zero transmission") {
        MetapopParams z = mp;
        z.psi = 0.0;
        z.base.beta_base = 0.0;
        const SimulationTrace t = simulate_metapop(b, z);
        for (const ReplicaTrace& r : t.replicas) {
            CHECK(r.counts.front()[0] == r.counts.back()[0]);  // S never shrinks
            for (const auto& c : r.counts) CHECK(c[0] + c[1] + c[2] + c[3] == 80);
        }
    }
    SUBCASE("unit populations with zero weights stay isolated") {
        const BipartiteGraph empty(3, 1, {});
        MetapopParams z = mp;
        z.cbg_populations = {1, 1, 1};
        z.base.p0 = 0.4;
        const SimulationTrace t = simulate_metapop(empty, z);
        for (const ReplicaTrace& r : t.replicas)
            CHECK(r.total_infected == r.counts.front()[1]);  // only the seeds
    }
    SUBCASE("zero visits give zero rate, not a division error") {
        // POI with no visitors while infections exist elsewhere
        const BipartiteGraph g2(2, 2, {{0, 0, 5.0}, {1, 0, 3.0}});
        MetapopParams z = mp;
        z.poi_areas = {100.0, 10.0};
        z.poi_dwell = {1.0, 1.0};
        z.base.p0 = 0.2;
        CHECK_NOTHROW(simulate_metapop(g2, z));
    }
    SUBCASE("parameter validation") {
        MetapopParams bad = mp;
        bad.poi_areas = {0.0};
        CHECK_THROWS_AS(simulate_metapop(b, bad), DataError);
        bad = mp;
        bad.cbg_populations = {50};
        CHECK_THROWS_AS(simulate_metapop(b, bad), DataError);
    }
}

TEST_CASE("metapop mean exposure matches the closed form") {
    // Single group, single location. Seeds are exposed deterministically
    // (ceil(p0 N) = 100); with delta_e = 1 they all turn infectious after
    // epoch 1 while S is untouched (no infectious people at epoch 0). The
    // epoch-2 exposures then have the exact Pois + Binom mean.
    const std::int64_t pop = 1000;
    const double w = 50.0;
    const BipartiteGraph b(1, 1, {{0, 0, w}});
    MetapopParams mp;
    mp.base = quick_params(EpidemicModel::metapop_seir);
    mp.base.epochs = 2;
    mp.base.replicas = 20000;
    mp.base.beta_base = 0.02;
    mp.base.p0 = 0.1;
    mp.base.delta_e = 1.0;
    mp.base.delta_i = 1e9;  // nobody recovers during the check
    mp.psi = 0.002;
    mp.poi_areas = {25.0};
    mp.poi_dwell = {2.0};
    mp.cbg_populations = {pop};
    const SimulationTrace t = simulate_metapop(b, mp);

    const double seeds = 100.0, s1 = static_cast<double>(pop) - seeds;
    const double lambda_c = mp.base.beta_base * seeds / static_cast<double>(pop);
    const double i_p = (seeds / static_cast<double>(pop)) * w;
    const double beta_p = mp.psi * mp.poi_dwell[0] * mp.poi_dwell[0] * w / mp.poi_areas[0];
    const double lambda_p = beta_p * i_p / w;
    const double pois_mean = (s1 / static_cast<double>(pop)) * lambda_p * w;
    const double expect = pois_mean + s1 * lambda_c;
    const double var = pois_mean + s1 * lambda_c * (1.0 - lambda_c);

    double mean = 0.0;
    for (const ReplicaTrace& r : t.replicas) {
        CHECK(r.counts[1][2] == 100);  // all seeds infectious after epoch 1
        mean += static_cast<double>(r.counts[2][1]);  // E after epoch 2 = N_SE
    }
    mean /= static_cast<double>(t.replicas.size());
    const double sigma = std::sqrt(var / static_cast<double>(t.replicas.size()));
    CHECK(std::abs(mean - expect) <= 3.0 * sigma);
}

TEST_CASE("scale sweep rows") {
    const WeightedGraph g = random_graph(100, 500, 1.0, 3.0, 12);
    EpidemicParams p = quick_params(EpidemicModel::seir);
    p.replicas = 5;
    p.epochs = 10;
    SUBCASE("unit scale equals a direct simulation") {
        const auto rows = sweep_lambda_scaling(g, p, {1.0});
        REQUIRE(rows.size() == 1);
        const SimulationTrace direct = simulate_graph(g, p);
        CHECK(rows[0].mean_infected == direct.mean_total_infected());
        CHECK(rows[0].stddev_infected == direct.stddev_total_infected());
    }
    SUBCASE("zero scale leaves only the seeds") {
        const auto rows = sweep_lambda_scaling(g, p, {0.0});
        CHECK(rows[0].lambda1 == 0.0);
        CHECK(rows[0].mean_infected == doctest::Approx(std::ceil(p.p0 * 100)));
    }
}

TEST_CASE("parameter validation") {
    EpidemicParams p;
    p.p0 = 1.5;
    CHECK_THROWS_AS(p.validate(), DataError);
    p = EpidemicParams{};
    p.delta_i = 0.5;
    CHECK_THROWS_AS(p.validate(), DataError);
    p = EpidemicParams{};
    p.model = EpidemicModel::metapop_seir;
    const WeightedGraph g(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(simulate_graph(g, p), DataError);
}
