#include "support.hpp"

#include "dqssa/diffusion.hpp"

#include <doctest.h>

#include <set>

using namespace dqssa;
using namespace testing;

namespace {

DiffusionConfig cfg(double p, std::size_t r, std::uint64_t seed = 1, unsigned threads = 1) {
    DiffusionConfig c;
    c.p = p;
    c.num_simulations = r;
    c.rng_seed = seed;
    c.threads = threads;
    return c;
}

// Expected spread by summing over all live-edge subsets, written
// independently of the library with a per-subset BFS over std::set.
double oracle_spread(const Graph &g, const std::vector<NodeId> &seeds, double p) {
    const auto &edges = g.edges();
    const std::size_t m = edges.size();
    double expected = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double weight = 1.0;
        std::vector<std::set<NodeId>> adj(g.num_nodes());
        for (std::size_t e = 0; e < m; ++e) {
            if (mask >> e & 1) {
                weight *= p;
                adj[edges[e].first].insert(edges[e].second);
                adj[edges[e].second].insert(edges[e].first);
            } else {
                weight *= 1.0 - p;
            }
        }
        std::set<NodeId> reached(seeds.begin(), seeds.end());
        std::vector<NodeId> stack(seeds.begin(), seeds.end());
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (auto u : adj[v])
                if (reached.insert(u).second)
                    stack.push_back(u);
        }
        expected += weight * static_cast<double>(reached.size());
    }
    return expected / static_cast<double>(g.num_nodes());
}

} // namespace

TEST_CASE("degenerate probabilities") {
    Graph g = path_graph(5);
    SeedSet s({0});
    CHECK(fis(g, s, cfg(1.0, 50)).fis_mean == 1.0);
    CHECK(fis(g, s, cfg(1.0, 50)).fis_variance == 0.0);
    CHECK(fis(g, s, cfg(0.0, 50)).fis_mean == doctest::Approx(0.2));
    CHECK(ic_single_run(g, s, 1.0, 7) == std::vector<NodeId>{0, 1, 2, 3, 4});
}

TEST_CASE("edgeless graph spreads nowhere") {
    Graph g(4, Edges{});
    CHECK(fis(g, SeedSet({1, 2}), cfg(0.9, 100)).fis_mean == 0.5);
}

TEST_CASE("single run activation order starts with the seeds") {
    Graph g = random_graph(30, 0.2, 4);
    SeedSet s({3, 17});
    for (std::uint64_t key = 0; key < 50; ++key) {
        auto infected = ic_single_run(g, s, 0.3, key);
        REQUIRE(infected.size() >= 2);
        CHECK(std::set<NodeId>(infected.begin(), infected.begin() + 2) == std::set<NodeId>{3, 17});
        std::set<NodeId> unique(infected.begin(), infected.end());
        CHECK(unique.size() == infected.size());
        CascadeSimulator sim(g);
        CHECK(sim.run(s.nodes(), 0.3, key) == infected.size());
    }
}

TEST_CASE("three-node path with p = 0.5") {
    // 1 + 0.5 + 0.25 expected infections from the end of the path.
    Graph g = path_graph(3);
    CHECK(exact_expected_spread(g, SeedSet({0}), 0.5) == doctest::Approx(1.75 / 3.0));
    auto r = fis(g, SeedSet({0}), cfg(0.5, 200000, 11));
    CHECK(std::abs(r.fis_mean - 1.75 / 3.0) < 0.005);
    CHECK(r.samples == 200000);
}

TEST_CASE("exact spread examples") {
    Graph edge = path_graph(2);
    for (double p : {0.1, 0.5, 0.9})
        CHECK(exact_expected_spread(edge, SeedSet({0}), p) == doctest::Approx((1.0 + p) / 2.0));
    CHECK_THROWS_AS(exact_expected_spread(complete_graph(7), SeedSet({0}), 0.5),
                    std::invalid_argument);
}

TEST_CASE("exact spread agrees with the subset-enumeration oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Graph g = random_graph_m(8, 6 + seed % 8, seed);
        std::vector<NodeId> s{static_cast<NodeId>(seed % 8)};
        for (double p : {0.1, 0.5})
            CHECK(exact_expected_spread(g, SeedSet(s), p) ==
                  doctest::Approx(oracle_spread(g, s, p)).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo lands within four standard errors of the exact value") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = random_graph_m(9, 12, 50 + seed);
        SeedSet s({0, 5});
        const std::size_t runs = 20000;
        auto r = fis(g, s, cfg(0.3, runs, seed));
        double exact = exact_expected_spread(g, s, 0.3);
        double se = std::sqrt(std::max(r.fis_variance, 1e-6) / static_cast<double>(runs));
        CHECK(std::abs(r.fis_mean - exact) < 4.0 * se);
    }
}

TEST_CASE("common random numbers make spread monotone in p and in the seed set") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = random_graph(40, 0.08, seed);
        SeedSet small({1}), large({1, 7, 20});
        double last = 0.0;
        for (double p : {0.05, 0.1, 0.2, 0.4, 0.8}) {
            double v = fis(g, small, cfg(p, 300, seed)).fis_mean;
            CHECK(v >= last);
            last = v;
            CHECK(fis(g, large, cfg(p, 300, seed)).fis_mean >= v);
        }
    }
}

TEST_CASE("results are deterministic and independent of thread count") {
    Graph g = random_graph(60, 0.06, 3);
    SeedSet s({0, 10, 20});
    auto one = fis(g, s, cfg(0.2, 5000, 9, 1));
    auto again = fis(g, s, cfg(0.2, 5000, 9, 1));
    auto four = fis(g, s, cfg(0.2, 5000, 9, 4));
    CHECK(one.fis_mean == again.fis_mean);
    CHECK(one.fis_mean == four.fis_mean);
    CHECK(one.fis_variance == four.fis_variance);
}

TEST_CASE("invalid input") {
    Graph g = path_graph(3);
    CHECK_THROWS(fis(g, SeedSet({5}), cfg(0.1, 10)));
    CHECK_THROWS(fis(g, SeedSet({0}), cfg(1.5, 10)));
    CHECK_THROWS(fis(g, SeedSet({0}), cfg(0.1, 0)));
}
