#pragma once

#include "dqssa/community.hpp"
#include "dqssa/graph.hpp"
#include "dqssa/objective.hpp"
#include "dqssa/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace dqssa {

enum class Algorithm { DQSSA, DQPSO, DQBA, DPSO, DBA };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
// DQSSA, DQPSO and DQBA carry the opposition + mutation layer.
bool has_quantum_layer(Algorithm a);

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds uniform(std::size_t dims, double lo, double hi);
    std::size_t dims() const { return lower.size(); }
    bool contains(std::span<const double> x) const;
};

struct Position {
    std::vector<double> coords;
};

enum class OppositionForm {
    Difference, // mu * (ub - lb) - x
    Sum,        // mu * (ub + lb) - x
};

struct PsoParams {
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
};

struct BatParams {
    double f_min = 0.0;
    double f_max = 2.0;
    double loudness = 1.0;    // initial A
    double pulse_rate = 0.5;  // r0
    double alpha = 0.9;       // loudness decay
    double gamma = 0.9;       // pulse-rate growth
    double walk_fraction = 0.1; // local walk radius as a fraction of the range
};

struct SwarmConfig {
    Algorithm algorithm = Algorithm::DQSSA;
    std::size_t population = 20;
    std::size_t iterations = 100;
    std::size_t k = 1;
    double sigma = 0.1;
    double elite_fraction = 0.25;
    double mutation_fraction = 0.2;
    OppositionForm opposition = OppositionForm::Difference;
    double infection_probability = 0.1; // p inside the LIE fitness
    std::uint64_t rng_seed = 0;
    PsoParams pso;
    BatParams bat;

    // Throws std::invalid_argument on N < 2, T < 1, k outside [1, pool_size]
    // or sigma outside (0, 1].
    void validate(std::size_t pool_size) const;
};

// Decodes positions through the candidate pool and scores them with LIE.
class SwarmObjective {
  public:
    SwarmObjective(const Graph &g, const CandidatePool &pool, InfectionProbability p);

    double operator()(const Position &x);
    double operator()(const Position &x, std::vector<NodeId> &decoded);

    const CandidatePool &pool() const { return *pool_; }
    std::size_t evaluations() const { return evaluations_; }

  private:
    const CandidatePool *pool_;
    LieEvaluator lie_;
    std::vector<NodeId> scratch_;
    std::size_t evaluations_ = 0;
};

struct SwarmState {
    std::vector<Position> positions;
    std::vector<double> fitness;
    Position food;
    double food_fitness = 0.0;
    std::vector<NodeId> food_seeds;
    std::size_t t = 0;

    // PSO and bat bookkeeping; empty for SSA.
    std::vector<Position> velocity;
    std::vector<Position> personal_best;
    std::vector<double> personal_best_fitness;
    std::vector<double> loudness;
    std::vector<double> pulse_rate;

    // Records a scored position; replaces the food source on strict
    // improvement.
    void observe(const Position &x, double value, const std::vector<NodeId> &decoded);
};

struct Trace {
    std::vector<double> best_fitness; // one entry per iteration
    std::vector<double> elapsed_ms;   // cumulative
};

void write_trace_csv(const Trace &trace, std::ostream &out);

struct OptimizeResult {
    SeedSet seeds;
    double fitness = 0.0;
    Trace trace;
    std::size_t evaluations = 0;
};

// --- single steps -------------------------------------------------------

Position reverse_learning(const Position &x, const Bounds &b, double mu,
                          OppositionForm form = OppositionForm::Difference);

// upward[j] selects x + sigma * (ub - x); otherwise x + sigma * (x - lb).
Position quantum_mutation(const Position &x, const Bounds &b, double sigma,
                          std::span<const std::uint8_t> upward);
Position quantum_mutation(const Position &x, const Bounds &b, double sigma, Rng &rng);

// round -> clamp to [0, pool_size - 1] -> pool lookup. Repeated nodes are
// replaced, in dimension order, by the highest-ranked pool node not already
// chosen. Returns k distinct nodes in dimension order.
std::vector<NodeId> discretize(const Position &x, const CandidatePool &pool);

// Salp chain move: leaders chase the food source, followers average with
// their predecessor. Does not evaluate.
void ssa_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng);

// PSO velocity/position move. Does not evaluate.
void pso_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng);

// Bat move including the greedy loudness-gated acceptance, which needs
// fitness values; evaluates each bat once.
void bat_update(SwarmState &state, const SwarmConfig &config, const Bounds &b, Rng &rng,
                SwarmObjective &objective);

// Opposite points for the top ceil(N * elite_fraction) individuals; each keeps
// the fitter of itself and its opposite.
void elite_opposition_step(SwarmState &state, const SwarmConfig &config, const Bounds &b,
                           Rng &rng, SwarmObjective &objective);

// Mutates a random ceil(N * mutation_fraction) subset; mutants replace their
// parent only when fitter.
void quantum_mutation_step(SwarmState &state, const SwarmConfig &config, const Bounds &b,
                           Rng &rng, SwarmObjective &objective);

std::size_t elite_count(const SwarmConfig &config);
std::size_t mutation_count(const SwarmConfig &config);

// Initial population, uniform in the bounds, evaluated.
SwarmState initialize_swarm(const SwarmConfig &config, const Bounds &b, Rng &rng,
                            SwarmObjective &objective);

// Full run of the configured algorithm over T iterations.
OptimizeResult optimize(const Graph &g, const CandidatePool &pool, const SwarmConfig &config);

} // namespace dqssa
