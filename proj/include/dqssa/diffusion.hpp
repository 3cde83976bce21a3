#pragma once

#include "dqssa/graph.hpp"
#include "dqssa/objective.hpp"

#include <chrono>
#include <cstdint>
#include <vector>

namespace dqssa {

struct DiffusionConfig {
    double p = 0.1;
    std::size_t num_simulations = 10000;
    std::uint64_t rng_seed = 0;
    unsigned threads = 1;
};

struct DiffusionResult {
    double fis_mean = 0.0;     // expected infected fraction of n
    double fis_variance = 0.0; // population variance of the per-run fraction
    std::size_t samples = 0;
    std::chrono::duration<double> elapsed{};
};

// One Independent Cascade run. Edge coin flips come from a counter-based
// hash of (run_key, edge id), so two runs with the same key share their
// random numbers: the infected set is monotone in p and in the seed set.
// Returns the infected nodes (seeds included) in activation order.
std::vector<NodeId> ic_single_run(const Graph &g, const SeedSet &s, double p,
                                  std::uint64_t run_key);

// Infected-set size only; reuses caller scratch to avoid allocation.
class CascadeSimulator {
  public:
    explicit CascadeSimulator(const Graph &g);
    std::size_t run(std::span<const NodeId> seeds, double p, std::uint64_t run_key);

  private:
    const Graph *g_;
    std::vector<std::uint32_t> stamp_;
    std::vector<NodeId> queue_;
    std::uint32_t epoch_ = 0;
};

// Mean infected fraction over R runs with per-run keys derived from
// rng_seed. Counts are integers, so the reduction is exact and independent
// of the thread count.
DiffusionResult fis(const Graph &g, const SeedSet &s, const DiffusionConfig &config);

// Exact expected infected fraction by enumerating every live-edge subset.
// Refuses graphs with more than 20 edges.
double exact_expected_spread(const Graph &g, const SeedSet &s, double p);

} // namespace dqssa
