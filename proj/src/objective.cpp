#include "dqssa/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqssa {

SeedSet::SeedSet(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
        throw GraphError("seed set contains duplicate nodes");
}

bool SeedSet::contains(NodeId v) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

InfectionProbability::InfectionProbability(double p) : p_(p) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("infection probability must lie in (0, 1]");
}

namespace {
constexpr std::uint8_t kSeed = 1;
constexpr std::uint8_t kFrontier = 2;
} // namespace

LieEvaluator::LieEvaluator(const Graph &g, InfectionProbability p)
    : g_(&g), p_(p.value()), stamp_(g.num_nodes(), 0), role_(g.num_nodes(), 0),
      seed_count_(g.num_nodes(), 0) {
    miss_pow_.resize(g.max_degree() + 1);
    for (std::size_t c = 0; c < miss_pow_.size(); ++c)
        miss_pow_[c] = std::pow(1.0 - p_, static_cast<double>(c));
}

double LieEvaluator::operator()(std::span<const NodeId> seeds) {
    const auto &g = *g_;
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    auto role = [&](NodeId v) { return stamp_[v] == epoch_ ? role_[v] : std::uint8_t{0}; };

    unique_seeds_.clear();
    for (auto s : seeds) {
        if (!g.contains(s))
            throw GraphError("seed node " + std::to_string(s) + " out of range");
        if (role(s) == kSeed)
            continue;
        stamp_[s] = epoch_;
        role_[s] = kSeed;
        unique_seeds_.push_back(s);
    }
    frontier_.clear();
    for (auto s : unique_seeds_) {
        for (auto u : g.neighbors(s)) {
            auto r = role(u);
            if (r == kSeed)
                continue;
            if (r != kFrontier) {
                stamp_[u] = epoch_;
                role_[u] = kFrontier;
                seed_count_[u] = 0;
                frontier_.push_back(u);
            }
            ++seed_count_[u];
        }
    }

    double value = static_cast<double>(unique_seeds_.size());
    for (auto u : frontier_) {
        std::uint32_t outside = 0;
        for (auto w : g.neighbors(u))
            outside += role(w) == 0;
        double activation = 1.0 - miss_pow_[seed_count_[u]];
        value += activation * (1.0 + p_ * static_cast<double>(outside));
    }
    return value;
}

double lie(const Graph &g, const SeedSet &s, InfectionProbability p) {
    LieEvaluator eval(g, p);
    return eval(s);
}

} // namespace dqssa
