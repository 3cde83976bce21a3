#pragma once

#include "dqssa/community.hpp"
#include "dqssa/graph.hpp"
#include "dqssa/objective.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace dqssa {

enum class CentralityMethod { HI, GLR, PR, ENC };

std::string_view to_string(CentralityMethod m);
std::optional<CentralityMethod> parse_centrality(std::string_view name);

struct ScoreVector {
    CentralityMethod method = CentralityMethod::PR;
    std::vector<double> scores;
    bool converged = true; // PageRank only
    std::size_t iterations = 0;
};

// Power iteration with uniform teleport; degree-0 nodes spread their mass
// uniformly. converged is false when max_iter ran out first.
ScoreVector pagerank(const Graph &g, double damping = 0.85, double tol = 1e-10,
                     std::size_t max_iter = 200);

// Largest h such that v has at least h neighbours of degree >= h.
ScoreVector h_index(const Graph &g);

// Coreness by bucketed minimum-degree peeling.
std::vector<std::uint32_t> k_shell(const Graph &g);

// Extended neighbourhood coreness: sum over neighbours of their neighbourhood
// coreness (sum of neighbour shell indices).
ScoreVector enc(const Graph &g);

// degree(v) + gamma * (number of neighbours in another community).
ScoreVector glr(const Graph &g, const Partition &p, double gamma = 2.0);

// k highest scores; ties go to the smaller original id.
SeedSet top_k_seeds(const Graph &g, const ScoreVector &scores, std::size_t k);

void write_scores_csv(const Graph &g, const ScoreVector &scores, std::ostream &out);

} // namespace dqssa
