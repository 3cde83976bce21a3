#include "dqssa/swarm.hpp"

#include "dqssa/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dqssa {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::DQSSA: return "DQSSA";
    case Algorithm::DQPSO: return "DQPSO";
    case Algorithm::DQBA: return "DQBA";
    case Algorithm::DPSO: return "DPSO";
    case Algorithm::DBA: return "DBA";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::DQSSA, Algorithm::DQPSO, Algorithm::DQBA, Algorithm::DPSO,
                   Algorithm::DBA})
        if (to_string(a) == name)
            return a;
    return std::nullopt;
}

bool has_quantum_layer(Algorithm a) {
    return a == Algorithm::DQSSA || a == Algorithm::DQPSO || a == Algorithm::DQBA;
}

Bounds Bounds::uniform(std::size_t dims, double lo, double hi) {
    return Bounds{std::vector<double>(dims, lo), std::vector<double>(dims, hi)};
}

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != dims())
        return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!(x[j] >= lower[j] && x[j] <= upper[j]))
            return false;
    return true;
}

void SwarmConfig::validate(std::size_t pool_size) const {
    if (population < 2)
        throw std::invalid_argument("population must be at least 2");
    if (iterations < 1)
        throw std::invalid_argument("iterations must be at least 1");
    if (k < 1 || k > pool_size)
        throw std::invalid_argument("k must lie in [1, pool_size]");
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::invalid_argument("sigma must lie in (0, 1]");
    if (!(elite_fraction >= 0.0 && elite_fraction <= 1.0) ||
        !(mutation_fraction >= 0.0 && mutation_fraction <= 1.0))
        throw std::invalid_argument("elite and mutation fractions must lie in [0, 1]");
}

SwarmObjective::SwarmObjective(const Graph &g, const CandidatePool &pool, InfectionProbability p)
    : pool_(&pool), lie_(g, p) {}

double SwarmObjective::operator()(const Position &x) { return (*this)(x, scratch_); }

double SwarmObjective::operator()(const Position &x, std::vector<NodeId> &decoded) {
    decoded = discretize(x, *pool_);
    ++evaluations_;
    return lie_(decoded);
}

void SwarmState::observe(const Position &x, double value, const std::vector<NodeId> &decoded) {
    if (food_seeds.empty() || value > food_fitness) {
        food = x;
        food_fitness = value;
        food_seeds = decoded;
    }
}

void write_trace_csv(const Trace &trace, std::ostream &out) {
    out << "iteration,best_lie,elapsed_ms\n";
    for (std::size_t i = 0; i < trace.best_fitness.size(); ++i)
        out << (i + 1) << ',' << trace.best_fitness[i] << ',' << trace.elapsed_ms[i] << '\n';
}

Position reverse_learning(const Position &x, const Bounds &b, double mu, OppositionForm form) {
    Position out{std::vector<double>(x.coords.size())};
    simd::kernels().reverse_learning(x.coords, b.lower, b.upper, mu, form == OppositionForm::Sum,
                                     out.coords);
    return out;
}

Position quantum_mutation(const Position &x, const Bounds &b, double sigma,
                          std::span<const std::uint8_t> upward) {
    Position out{std::vector<double>(x.coords.size())};
    simd::kernels().quantum_mutation(x.coords, b.lower, b.upper, upward, sigma, out.coords);
    return out;
}

Position quantum_mutation(const Position &x, const Bounds &b, double sigma, Rng &rng) {
    std::vector<std::uint8_t> upward(x.coords.size());
    for (auto &u : upward)
        u = uniform01(rng) < 0.5;
    return quantum_mutation(x, b, sigma, upward);
}

std::vector<NodeId> discretize(const Position &x, const CandidatePool &pool) {
    const std::size_t pool_size = pool.pool_size();
    const std::size_t k = x.coords.size();
    if (pool_size < k)
        throw std::invalid_argument("candidate pool smaller than seed-set size");
    std::vector<std::size_t> index(k);
    std::vector<std::uint8_t> used(pool_size, 0);
    std::vector<std::uint8_t> duplicate(k, 0);
    const double top = static_cast<double>(pool_size - 1);
    for (std::size_t j = 0; j < k; ++j) {
        double r = std::round(x.coords[j]);
        r = std::clamp(std::isnan(r) ? 0.0 : r, 0.0, top);
        index[j] = static_cast<std::size_t>(r);
        if (used[index[j]])
            duplicate[j] = 1;
        used[index[j]] = 1;
    }
    std::size_t next_free = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (!duplicate[j])
            continue;
        while (used[next_free])
            ++next_free;
        index[j] = next_free;
        used[next_free] = 1;
    }
    std::vector<NodeId> seeds(k);
    for (std::size_t j = 0; j < k; ++j)
        seeds[j] = pool.ranked[index[j]];
    return seeds;
}

std::size_t elite_count(const SwarmConfig &config) {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(config.population) * config.elite_fraction));
}

std::size_t mutation_count(const SwarmConfig &config) {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(config.population) * config.mutation_fraction));
}

void ssa_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng) {
    const auto &kern = simd::kernels();
    const std::size_t n = state.positions.size();
    const std::size_t leaders = (n + 1) / 2;
    const double ratio = 4.0 * static_cast<double>(state.t) / static_cast<double>(config.iterations);
    const double c1 = 2.0 * std::exp(-ratio * ratio);
    std::vector<double> c2(b.dims()), c3(b.dims());
    for (std::size_t i = 0; i < n; ++i) {
        auto &x = state.positions[i].coords;
        if (i < leaders) {
            for (std::size_t j = 0; j < b.dims(); ++j) {
                c2[j] = uniform01(rng);
                c3[j] = uniform01(rng);
            }
            kern.salp_leader(state.food.coords, b.lower, b.upper, c2, c3, c1, x);
        } else {
            kern.salp_follower(x, state.positions[i - 1].coords, b.lower, b.upper);
        }
    }
}

namespace {

std::vector<double> half_range(const Bounds &b) {
    std::vector<double> v(b.dims());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = 0.5 * (b.upper[j] - b.lower[j]);
    return v;
}

void replace_member(SwarmState &state, std::size_t i, Position x, double value) {
    if (!state.personal_best.empty() && value > state.personal_best_fitness[i]) {
        state.personal_best[i] = x;
        state.personal_best_fitness[i] = value;
    }
    state.positions[i] = std::move(x);
    state.fitness[i] = value;
}

} // namespace

void pso_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng) {
    const auto &kern = simd::kernels();
    const auto vmax = half_range(b);
    std::vector<double> r1(b.dims()), r2(b.dims());
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        for (std::size_t j = 0; j < b.dims(); ++j) {
            r1[j] = uniform01(rng);
            r2[j] = uniform01(rng);
        }
        kern.pso_step(state.positions[i].coords, state.velocity[i].coords,
                      state.personal_best[i].coords, state.food.coords, r1, r2,
                      config.pso.inertia, config.pso.cognitive, config.pso.social, vmax, b.lower,
                      b.upper);
    }
}

void bat_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng,
                SwarmObjective &objective) {
    const auto &kern = simd::kernels();
    const auto &bp = config.bat;
    const auto vmax = half_range(b);
    const double mean_loudness =
        std::accumulate(state.loudness.begin(), state.loudness.end(), 0.0) /
        static_cast<double>(state.loudness.size());
    std::vector<NodeId> decoded;
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        const double freq = bp.f_min + (bp.f_max - bp.f_min) * uniform01(rng);
        Position candidate = state.positions[i];
        kern.bat_step(candidate.coords, state.velocity[i].coords, state.food.coords, freq, vmax,
                      b.lower, b.upper);
        if (uniform01(rng) > state.pulse_rate[i]) {
            for (std::size_t j = 0; j < b.dims(); ++j) {
                double radius = std::max(1.0, bp.walk_fraction * (b.upper[j] - b.lower[j]));
                double eps = 2.0 * uniform01(rng) - 1.0;
                candidate.coords[j] = state.food.coords[j] + eps * mean_loudness * radius;
            }
            kern.clamp(candidate.coords, b.lower, b.upper);
        }
        double value = objective(candidate, decoded);
        state.observe(candidate, value, decoded);
        if (value >= state.fitness[i] && uniform01(rng) < state.loudness[i]) {
            state.positions[i] = std::move(candidate);
            state.fitness[i] = value;
            state.loudness[i] *= bp.alpha;
            state.pulse_rate[i] =
                bp.pulse_rate * (1.0 - std::exp(-bp.gamma * static_cast<double>(state.t)));
        }
    }
}

void elite_opposition_step(SwarmState &state, const SwarmConfig &config, const Bounds &b,
                           Rng &rng, SwarmObjective &objective) {
    const std::size_t n = state.positions.size();
    const std::size_t elites = std::min(n, elite_count(config));
    if (elites == 0)
        return;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return state.fitness[a] > state.fitness[c]; });
    std::vector<NodeId> decoded;
    for (std::size_t e = 0; e < elites; ++e) {
        const auto i = order[e];
        const double mu = 1.0 - uniform01(rng); // (0, 1]
        Position opposite = reverse_learning(state.positions[i], b, mu, config.opposition);
        double value = objective(opposite, decoded);
        state.observe(opposite, value, decoded);
        if (value > state.fitness[i])
            replace_member(state, i, std::move(opposite), value);
    }
}

void quantum_mutation_step(SwarmState &state, const SwarmConfig &config, const Bounds &b,
                           Rng &rng, SwarmObjective &objective) {
    const std::size_t n = state.positions.size();
    const std::size_t count = std::min(n, mutation_count(config));
    if (count == 0)
        return;
    std::vector<std::size_t> all(n), chosen;
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);
    std::vector<NodeId> decoded;
    for (auto i : chosen) {
        Position mutant = quantum_mutation(state.positions[i], b, config.sigma, rng);
        double value = objective(mutant, decoded);
        state.observe(mutant, value, decoded);
        if (value > state.fitness[i])
            replace_member(state, i, std::move(mutant), value);
    }
}

SwarmState initialize_swarm(const SwarmConfig &config, const Bounds &b, Rng &rng,
                            SwarmObjective &objective) {
    SwarmState state;
    const std::size_t n = config.population;
    state.positions.resize(n);
    state.fitness.resize(n);
    std::vector<NodeId> decoded;
    for (std::size_t i = 0; i < n; ++i) {
        auto &x = state.positions[i].coords;
        x.resize(b.dims());
        for (std::size_t j = 0; j < b.dims(); ++j)
            x[j] = b.lower[j] + (b.upper[j] - b.lower[j]) * uniform01(rng);
        state.fitness[i] = objective(state.positions[i], decoded);
        state.observe(state.positions[i], state.fitness[i], decoded);
    }
    switch (config.algorithm) {
    case Algorithm::DPSO:
    case Algorithm::DQPSO:
        state.velocity.assign(n, Position{std::vector<double>(b.dims(), 0.0)});
        state.personal_best = state.positions;
        state.personal_best_fitness = state.fitness;
        break;
    case Algorithm::DBA:
    case Algorithm::DQBA:
        state.velocity.assign(n, Position{std::vector<double>(b.dims(), 0.0)});
        state.loudness.assign(n, config.bat.loudness);
        state.pulse_rate.assign(n, config.bat.pulse_rate);
        break;
    case Algorithm::DQSSA:
        break;
    }
    return state;
}

OptimizeResult optimize(const Graph &g, const CandidatePool &pool, const SwarmConfig &config) {
    config.validate(pool.pool_size());
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    const Bounds bounds =
        Bounds::uniform(config.k, 0.0, static_cast<double>(pool.pool_size() - 1));
    SwarmObjective objective(g, pool, InfectionProbability(config.infection_probability));

    // Separate streams keep the base dynamics independent of the quantum
    // layer's draws.
    Rng init_rng(derive_seed(config.rng_seed, {0}));
    Rng base_rng(derive_seed(config.rng_seed, {1}));
    Rng quantum_rng(derive_seed(config.rng_seed, {2}));

    SwarmState state = initialize_swarm(config, bounds, init_rng, objective);
    OptimizeResult result;
    result.trace.best_fitness.reserve(config.iterations);
    result.trace.elapsed_ms.reserve(config.iterations);
    std::vector<NodeId> decoded;

    for (std::size_t t = 1; t <= config.iterations; ++t) {
        state.t = t;
        switch (config.algorithm) {
        case Algorithm::DQSSA:
            ssa_update(state, config, bounds, base_rng);
            for (std::size_t i = 0; i < state.positions.size(); ++i) {
                state.fitness[i] = objective(state.positions[i], decoded);
                state.observe(state.positions[i], state.fitness[i], decoded);
            }
            break;
        case Algorithm::DPSO:
        case Algorithm::DQPSO:
            pso_update(state, config, bounds, base_rng);
            for (std::size_t i = 0; i < state.positions.size(); ++i) {
                state.fitness[i] = objective(state.positions[i], decoded);
                state.observe(state.positions[i], state.fitness[i], decoded);
                if (state.fitness[i] > state.personal_best_fitness[i]) {
                    state.personal_best[i] = state.positions[i];
                    state.personal_best_fitness[i] = state.fitness[i];
                }
            }
            break;
        case Algorithm::DBA:
        case Algorithm::DQBA:
            bat_update(state, config, bounds, base_rng, objective);
            break;
        }
        if (has_quantum_layer(config.algorithm)) {
            elite_opposition_step(state, config, bounds, quantum_rng, objective);
            quantum_mutation_step(state, config, bounds, quantum_rng, objective);
        }
        result.trace.best_fitness.push_back(state.food_fitness);
        result.trace.elapsed_ms.push_back(
            std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }

    result.seeds = SeedSet(state.food_seeds);
    result.fitness = state.food_fitness;
    result.evaluations = objective.evaluations();
    return result;
}

} // namespace dqssa
