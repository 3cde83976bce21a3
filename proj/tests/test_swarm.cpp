#include "support.hpp"

#include "dqssa/swarm.hpp"

#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

using namespace dqssa;
using namespace testing;

namespace {

CandidatePool pool_of(std::vector<NodeId> ranked, std::size_t n) {
    CandidatePool p;
    p.ranked = std::move(ranked);
    p.budget.assign(n, 0.0);
    for (std::size_t i = 0; i < p.ranked.size(); ++i)
        p.budget[p.ranked[i]] = static_cast<double>(p.ranked.size() - i);
    return p;
}

CandidatePool full_pool(const Graph &g) {
    std::vector<NodeId> all(g.num_nodes());
    std::iota(all.begin(), all.end(), NodeId{0});
    std::stable_sort(all.begin(), all.end(),
                     [&](NodeId a, NodeId b) { return degree(g, a) > degree(g, b); });
    return pool_of(all, g.num_nodes());
}

Position pos(std::vector<double> c) { return Position{std::move(c)}; }

SwarmConfig config_for(Algorithm a, std::size_t k, std::uint64_t seed) {
    SwarmConfig c;
    c.algorithm = a;
    c.k = k;
    c.rng_seed = seed;
    c.population = 10;
    c.iterations = 20;
    return c;
}

const Algorithm kAll[] = {Algorithm::DQSSA, Algorithm::DQPSO, Algorithm::DQBA, Algorithm::DPSO,
                          Algorithm::DBA};

} // namespace

TEST_CASE("algorithm names round trip") {
    for (auto a : kAll)
        CHECK(parse_algorithm(to_string(a)) == a);
    CHECK_FALSE(parse_algorithm("SSA").has_value());
    CHECK(has_quantum_layer(Algorithm::DQBA));
    CHECK_FALSE(has_quantum_layer(Algorithm::DPSO));
}

TEST_CASE("reverse learning examples") {
    const Bounds b = Bounds::uniform(1, 0.0, 10.0);
    CHECK(reverse_learning(pos({3.0}), b, 1.0).coords[0] == 7.0);
    CHECK(reverse_learning(pos({10.0}), b, 1.0).coords[0] == 0.0);
    // 0.5 * 10 - 8 = -3, clamped to the lower bound.
    CHECK(reverse_learning(pos({8.0}), b, 0.5).coords[0] == 0.0);
    // With lb = 0 both forms coincide.
    CHECK(reverse_learning(pos({3.0}), b, 0.7, OppositionForm::Sum).coords[0] ==
          reverse_learning(pos({3.0}), b, 0.7, OppositionForm::Difference).coords[0]);
    const Bounds shifted = Bounds::uniform(1, 2.0, 10.0);
    CHECK(reverse_learning(pos({3.0}), shifted, 1.0, OppositionForm::Difference).coords[0] == 5.0);
    CHECK(reverse_learning(pos({3.0}), shifted, 1.0, OppositionForm::Sum).coords[0] == 9.0);
}

TEST_CASE("quantum mutation branches") {
    const Bounds b = Bounds::uniform(2, 0.0, 10.0);
    std::vector<std::uint8_t> up{1, 0};
    auto m = quantum_mutation(pos({4.0, 4.0}), b, 0.5, up);
    CHECK(m.coords[0] == 7.0);
    CHECK(m.coords[1] == 6.0);
    // Vanishing sigma leaves the position alone.
    auto still = quantum_mutation(pos({4.0, 9.5}), b, 1e-300, up);
    CHECK(still.coords == std::vector<double>{4.0, 9.5});
    // Large steps are clamped.
    auto capped = quantum_mutation(pos({4.0, 8.0}), b, 1.0, std::vector<std::uint8_t>{1, 0});
    CHECK(capped.coords == std::vector<double>{10.0, 10.0});
}

TEST_CASE("quantum mutation stays in bounds for random inputs") {
    std::mt19937_64 rng(3);
    Rng r(4);
    for (int trial = 0; trial < 500; ++trial) {
        const Bounds b = Bounds::uniform(5, 0.0, 1.0 + trial % 40);
        Position x{std::vector<double>(5)};
        for (auto &c : x.coords)
            c = std::uniform_real_distribution<double>(0.0, b.upper[0])(rng);
        CHECK(b.contains(quantum_mutation(x, b, 0.01 + (trial % 100) / 100.0, r).coords));
    }
}

TEST_CASE("salp chain") {
    SwarmConfig c = config_for(Algorithm::DQSSA, 1, 0);
    c.population = 2;
    c.iterations = 10;
    const Bounds b = Bounds::uniform(1, 0.0, 10.0);
    Rng rng(1);

    SUBCASE("follower takes the midpoint with its predecessor") {
        SwarmState s;
        s.positions = {pos({0.0}), pos({2.0})};
        s.food = pos({4.0});
        s.t = c.iterations;
        ssa_update(s, c, b, rng);
        // At t = T the leader sits within 2 exp(-16) * 10 of the food source.
        CHECK(std::abs(s.positions[0].coords[0] - 4.0) < 1e-5);
        CHECK(s.positions[1].coords[0] == doctest::Approx((2.0 + s.positions[0].coords[0]) / 2));
    }
    SUBCASE("leaders stay in bounds early on") {
        SwarmState s;
        s.positions = {pos({0.0}), pos({2.0})};
        s.food = pos({9.9});
        for (std::size_t t = 1; t <= c.iterations; ++t) {
            s.t = t;
            ssa_update(s, c, b, rng);
            CHECK(b.contains(s.positions[0].coords));
            CHECK(b.contains(s.positions[1].coords));
        }
    }
}

TEST_CASE("elite and mutation counts") {
    SwarmConfig c;
    c.population = 4;
    CHECK(elite_count(c) == 1);
    c.population = 20;
    CHECK(elite_count(c) == 5);
    CHECK(mutation_count(c) == 4);
    c.population = 3;
    CHECK(mutation_count(c) == 1);
}

TEST_CASE("opposition keeps the better of original and opposite") {
    // Pool positions 0..4 map to nodes with rising LIE value only at the centre.
    Graph g = star_graph(4);
    CandidatePool pool = pool_of({1, 2, 3, 4, 0}, 5);
    SwarmObjective objective(g, pool, InfectionProbability(0.1));
    SwarmConfig c = config_for(Algorithm::DQSSA, 1, 0);
    c.population = 4;
    c.elite_fraction = 1.0;
    const Bounds b = Bounds::uniform(1, 0.0, 4.0);

    SwarmState s;
    std::vector<NodeId> decoded;
    s.positions = {pos({0.0}), pos({4.0}), pos({1.0}), pos({2.0})};
    for (auto &p : s.positions) {
        s.fitness.push_back(objective(p, decoded));
        s.observe(p, s.fitness.back(), decoded);
    }
    const auto before = s.fitness;
    Rng rng(9);
    elite_opposition_step(s, c, b, rng, objective);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(s.fitness[i] >= before[i]);
    // The member already on the centre is never displaced.
    CHECK(s.positions[1].coords[0] == 4.0);
    CHECK(s.food_seeds == std::vector<NodeId>{0});
}

TEST_CASE("discretize examples") {
    CandidatePool pool = pool_of({10, 11, 12}, 13);
    CHECK(discretize(pos({0.2, 1.6}), pool) == std::vector<NodeId>{10, 12});
    CHECK(discretize(pos({0.4, 0.4}), pool) == std::vector<NodeId>{10, 11});
    CHECK(discretize(pos({-5.0, 99.0}), pool) == std::vector<NodeId>{10, 12});
    CHECK(discretize(pos({2.0, 2.0, 2.0}), pool) == std::vector<NodeId>{12, 10, 11});
    CHECK_THROWS_AS(discretize(pos({0, 1, 2, 2}), pool), std::invalid_argument);
}

TEST_CASE("discretize yields k distinct pool members") {
    std::mt19937_64 rng(8);
    CandidatePool pool = pool_of({5, 3, 9, 1, 0, 7, 2, 8}, 10);
    std::uniform_real_distribution<double> coord(-3.0, 12.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t k = 1 + trial % 8;
        Position x{std::vector<double>(k)};
        for (auto &c : x.coords)
            c = coord(rng);
        auto seeds = discretize(x, pool);
        std::set<NodeId> unique(seeds.begin(), seeds.end());
        CHECK(unique.size() == k);
        for (auto v : seeds)
            CHECK(std::find(pool.ranked.begin(), pool.ranked.end(), v) != pool.ranked.end());
    }
}

TEST_CASE("pool equal to k returns the whole pool") {
    Graph g = random_graph(10, 0.3, 1);
    CandidatePool pool = pool_of({4, 2, 7}, 10);
    for (auto a : kAll) {
        auto r = optimize(g, pool, config_for(a, 3, 5));
        CHECK(r.seeds == SeedSet({2, 4, 7}));
    }
}

TEST_CASE("K5 with k = 1 finds a seed of LIE 1 + 4p") {
    Graph g = complete_graph(5);
    for (auto a : kAll) {
        auto r = optimize(g, full_pool(g), config_for(a, 1, 2));
        CHECK(r.fitness == doctest::Approx(1.4));
        CHECK(r.seeds.size() == 1);
    }
}

TEST_CASE("optimizers reach the brute-force optimum on a small graph") {
    Graph g = random_graph(12, 0.25, 21);
    const double best = best_lie_oracle(g, 2, 0.1);
    for (auto a : kAll) {
        SwarmConfig c = config_for(a, 2, 3);
        c.population = 20;
        c.iterations = 100;
        auto r = optimize(g, full_pool(g), c);
        CHECK(r.fitness == doctest::Approx(best).epsilon(1e-12));
        CHECK(r.fitness == doctest::Approx(lie_oracle(g, {r.seeds.nodes().begin(), r.seeds.nodes().end()}, 0.1)));
    }
}

TEST_CASE("PSO at its fixed point stays put") {
    SwarmConfig c = config_for(Algorithm::DPSO, 2, 0);
    const Bounds b = Bounds::uniform(2, 0.0, 9.0);
    SwarmState s;
    s.positions = {pos({3.0, 5.0})};
    s.velocity = {pos({0.0, 0.0})};
    s.personal_best = s.positions;
    s.food = s.positions[0];
    Rng rng(4);
    pso_update(s, c, b, rng);
    CHECK(s.positions[0].coords == std::vector<double>{3.0, 5.0});
    CHECK(s.velocity[0].coords == std::vector<double>{0.0, 0.0});
}

TEST_CASE("PSO velocity never exceeds half the range") {
    SwarmConfig c = config_for(Algorithm::DPSO, 3, 0);
    c.pso.inertia = 5.0;
    const Bounds b = Bounds::uniform(3, 0.0, 20.0);
    SwarmState s;
    s.positions = {pos({0.0, 20.0, 10.0}), pos({1.0, 2.0, 3.0})};
    s.velocity = {pos({9.0, -9.0, 9.0}), pos({-9.0, 9.0, 0.0})};
    s.personal_best = s.positions;
    s.food = pos({20.0, 0.0, 0.0});
    Rng rng(4);
    for (int step = 0; step < 50; ++step) {
        pso_update(s, c, b, rng);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(b.contains(s.positions[i].coords));
            for (auto v : s.velocity[i].coords)
                CHECK(std::abs(v) <= 10.0);
        }
    }
}

TEST_CASE("bat at its fixed point with zero frequency and no walk stays put") {
    Graph g = star_graph(4);
    CandidatePool pool = full_pool(g);
    SwarmObjective objective(g, pool, InfectionProbability(0.1));
    SwarmConfig c = config_for(Algorithm::DBA, 1, 0);
    c.bat.f_min = c.bat.f_max = 0.0;
    c.bat.pulse_rate = 1.0;
    const Bounds b = Bounds::uniform(1, 0.0, 4.0);
    SwarmState s;
    std::vector<NodeId> decoded;
    s.positions = {pos({0.0}), pos({3.0})};
    s.velocity = {pos({0.0}), pos({0.0})};
    s.loudness = {1.0, 1.0};
    s.pulse_rate = {1.0, 1.0};
    for (auto &p : s.positions) {
        s.fitness.push_back(objective(p, decoded));
        s.observe(p, s.fitness.back(), decoded);
    }
    Rng rng(5);
    bat_update(s, c, b, rng, objective);
    CHECK(s.positions[0].coords[0] == 0.0);
    CHECK(s.positions[1].coords[0] == 3.0);
}

TEST_CASE("quantum layer with a vanishing step and no elites changes nothing") {
    Graph g = random_graph(30, 0.15, 12);
    CandidatePool pool = full_pool(g);
    for (auto [plain, wrapped] : {std::pair{Algorithm::DPSO, Algorithm::DQPSO},
                                  std::pair{Algorithm::DBA, Algorithm::DQBA}}) {
        SwarmConfig c = config_for(plain, 3, 17);
        c.sigma = 1e-300;
        c.elite_fraction = 0.0;
        auto base = optimize(g, pool, c);
        c.algorithm = wrapped;
        auto quantum = optimize(g, pool, c);
        CHECK(base.trace.best_fitness == quantum.trace.best_fitness);
        CHECK(base.seeds == quantum.seeds);
    }
}

TEST_CASE("evaluation budget") {
    Graph g = random_graph(25, 0.2, 2);
    CandidatePool pool = full_pool(g);
    for (auto a : kAll) {
        SwarmConfig c = config_for(a, 3, 1);
        c.population = 20;
        c.iterations = 15;
        auto r = optimize(g, pool, c);
        std::size_t expected = 20 * 16;
        if (has_quantum_layer(a))
            expected += 15 * (5 + 4);
        CHECK(r.evaluations == expected);
        CHECK(r.trace.best_fitness.size() == 15);
    }
}

TEST_CASE("runs are deterministic and the incumbent never worsens") {
    Graph g = random_graph(40, 0.1, 6);
    CandidatePool pool = full_pool(g);
    for (auto a : kAll) {
        auto r1 = optimize(g, pool, config_for(a, 4, 99));
        auto r2 = optimize(g, pool, config_for(a, 4, 99));
        CHECK(r1.seeds == r2.seeds);
        CHECK(r1.trace.best_fitness == r2.trace.best_fitness);
        for (std::size_t i = 1; i < r1.trace.best_fitness.size(); ++i)
            CHECK(r1.trace.best_fitness[i] >= r1.trace.best_fitness[i - 1]);
        CHECK(r1.fitness == r1.trace.best_fitness.back());
        LieEvaluator eval(g, InfectionProbability(0.1));
        CHECK(eval(r1.seeds) == doctest::Approx(r1.fitness));
    }
}

TEST_CASE("config validation") {
    SwarmConfig c;
    c.k = 3;
    CHECK_NOTHROW(c.validate(5));
    CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
    c.population = 1;
    CHECK_THROWS_AS(c.validate(5), std::invalid_argument);
    c.population = 20;
    c.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(5), std::invalid_argument);
    c.sigma = 0.1;
    c.iterations = 0;
    CHECK_THROWS_AS(c.validate(5), std::invalid_argument);
    c.iterations = 10;
    c.k = 0;
    CHECK_THROWS_AS(c.validate(5), std::invalid_argument);
}

TEST_CASE("trace csv") {
    Trace t{{1.5, 2.0}, {0.1, 0.2}};
    std::ostringstream out;
    write_trace_csv(t, out);
    CHECK(out.str() == "iteration,best_lie,elapsed_ms\n1,1.5,0.1\n2,2,0.2\n");
}
