#pragma once

#include "dqssa/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dqssa {

struct Partition {
    std::vector<std::uint32_t> assignment; // node -> label in [0, num_communities)
    std::size_t num_communities = 0;
    double modularity = 0.0;
    // Modularity of the original graph after each completed pass, starting
    // with the all-singletons partition.
    std::vector<double> pass_modularity;
};

// Newman-Girvan modularity. Throws GraphError when the graph has no edges.
double modularity(const Graph &g, std::span<const std::uint32_t> assignment,
                  double resolution = 1.0);

// Multi-level Louvain. Node order in each local-moving sweep is a permutation
// drawn from rng_seed; a node only moves on a strictly positive gain.
Partition louvain(const Graph &g, double resolution = 1.0, std::uint64_t rng_seed = 0);

void write_partition(const Graph &g, const Partition &p, std::ostream &out);

struct CandidatePool {
    std::vector<NodeId> ranked; // descending budget
    std::vector<double> budget; // per node of the graph
    std::size_t pool_size() const { return ranked.size(); }
};

// Budget value of a node: its degree.
double budget_value(const Graph &g, NodeId v);

// Size-proportional per-community quotas of the highest-budget members,
// reconciled to exactly min(n, ceil(pool_factor * k)) nodes.
CandidatePool build_candidate_pool(const Graph &g, const Partition &p, std::size_t k,
                                   double pool_factor = 5.0);

} // namespace dqssa
