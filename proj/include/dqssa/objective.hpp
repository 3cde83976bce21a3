#pragma once

#include "dqssa/graph.hpp"

#include <span>
#include <vector>

namespace dqssa {

// Seed nodes in ascending order without duplicates.
class SeedSet {
  public:
    SeedSet() = default;
    explicit SeedSet(std::vector<NodeId> nodes);

    std::span<const NodeId> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    bool contains(NodeId v) const;
    bool operator==(const SeedSet &) const = default;

  private:
    std::vector<NodeId> nodes_;
};

class InfectionProbability {
  public:
    explicit InfectionProbability(double p);
    double value() const { return p_; }

  private:
    double p_;
};

// Local Influence Estimator, the two-hop closed-form spread surrogate:
//
//   LIE(S) = |S| + sum_{u in N1(S)} [1 - (1-p)^c_u] * (1 + p * d2_u)
//
// N1(S) is the one-hop frontier of S, c_u the number of seed neighbours of
// u, and d2_u the number of neighbours of u outside S and N1(S).
//
// The evaluator owns scratch buffers sized to the graph, so one instance
// per thread.
class LieEvaluator {
  public:
    LieEvaluator(const Graph &g, InfectionProbability p);

    double operator()(std::span<const NodeId> seeds);
    double operator()(const SeedSet &s) { return (*this)(s.nodes()); }

    const Graph &graph() const { return *g_; }
    double probability() const { return p_; }

  private:
    const Graph *g_;
    double p_;
    std::vector<double> miss_pow_; // (1-p)^c
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint8_t> role_;
    std::vector<std::uint32_t> seed_count_;
    std::vector<NodeId> unique_seeds_;
    std::vector<NodeId> frontier_;
    std::uint32_t epoch_ = 0;
};

double lie(const Graph &g, const SeedSet &s, InfectionProbability p);

} // namespace dqssa
