#include "dqssa/community.hpp"

#include "dqssa/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace dqssa {

double modularity(const Graph &g, std::span<const std::uint32_t> assignment, double resolution) {
    if (g.num_edges() == 0)
        throw GraphError("modularity undefined for a graph without edges");
    if (assignment.size() != g.num_nodes())
        throw GraphError("assignment size does not match node count");
    std::uint32_t labels = 0;
    for (auto c : assignment)
        labels = std::max(labels, c + 1);
    std::vector<double> internal(labels, 0.0), total(labels, 0.0);
    for (auto [u, v] : g.edges())
        if (assignment[u] == assignment[v])
            internal[assignment[u]] += 1.0;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        total[assignment[v]] += static_cast<double>(g.degree_unchecked(v));
    const double m = static_cast<double>(g.num_edges());
    double q = 0.0;
    for (std::uint32_t c = 0; c < labels; ++c) {
        double share = total[c] / (2.0 * m);
        q += internal[c] / m - resolution * share * share;
    }
    return q;
}

namespace {

// Weighted multigraph used by the aggregation levels. Self-loop weight is
// stored separately and counts twice towards the node strength.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    double total_weight = 0.0; // sum of strengths = 2m

    std::size_t size() const { return adj.size(); }
    double strength(std::uint32_t v) const {
        double s = 2.0 * self_weight[v];
        for (auto [u, w] : adj[v])
            s += w;
        return s;
    }
};

LevelGraph level_from_graph(const Graph &g) {
    LevelGraph lg;
    lg.adj.resize(g.num_nodes());
    lg.self_weight.assign(g.num_nodes(), 0.0);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        for (auto u : g.neighbors(v))
            lg.adj[v].emplace_back(u, 1.0);
    lg.total_weight = 2.0 * static_cast<double>(g.num_edges());
    return lg;
}

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const LevelGraph &lg, double resolution, Rng &rng,
                  std::vector<std::uint32_t> &community) {
    const std::size_t n = lg.size();
    std::vector<double> strength(n), tot(n, 0.0);
    for (std::uint32_t v = 0; v < n; ++v) {
        strength[v] = lg.strength(v);
        tot[community[v]] += strength[v];
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<double> link(n, 0.0);
    std::vector<std::uint32_t> touched;
    const double two_m = lg.total_weight;
    bool any_move = false;

    for (;;) {
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t moves = 0;
        for (auto v : order) {
            const auto own = community[v];
            touched.clear();
            for (auto [u, w] : lg.adj[v]) {
                auto c = community[u];
                if (link[c] == 0.0)
                    touched.push_back(c);
                link[c] += w;
            }
            tot[own] -= strength[v];
            const double scale = resolution * strength[v] / two_m;
            double best_gain = link[own] - tot[own] * scale;
            auto best = own;
            for (auto c : touched) {
                if (c == own)
                    continue;
                double gain = link[c] - tot[c] * scale;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += strength[v];
            if (best != own) {
                community[v] = best;
                ++moves;
            }
            for (auto c : touched)
                link[c] = 0.0;
        }
        if (moves == 0)
            break;
        any_move = true;
    }
    return any_move;
}

// Relabels to contiguous ids in order of first appearance; returns count.
std::size_t compact_labels(std::vector<std::uint32_t> &labels) {
    std::vector<std::uint32_t> remap(labels.size() + 1, UINT32_MAX);
    std::uint32_t next = 0;
    for (auto &c : labels) {
        if (remap[c] == UINT32_MAX)
            remap[c] = next++;
        c = remap[c];
    }
    return next;
}

LevelGraph aggregate(const LevelGraph &lg, const std::vector<std::uint32_t> &community,
                     std::size_t count) {
    LevelGraph next;
    next.adj.resize(count);
    next.self_weight.assign(count, 0.0);
    next.total_weight = lg.total_weight;
    std::vector<double> acc(count, 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<std::vector<std::uint32_t>> members(count);
    for (std::uint32_t v = 0; v < lg.size(); ++v)
        members[community[v]].push_back(v);
    for (std::uint32_t c = 0; c < count; ++c) {
        touched.clear();
        for (auto v : members[c]) {
            next.self_weight[c] += lg.self_weight[v];
            for (auto [u, w] : lg.adj[v]) {
                auto cu = community[u];
                if (cu == c) {
                    // each internal edge is seen from both endpoints
                    next.self_weight[c] += 0.5 * w;
                    continue;
                }
                if (acc[cu] == 0.0)
                    touched.push_back(cu);
                acc[cu] += w;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto cu : touched) {
            next.adj[c].emplace_back(cu, acc[cu]);
            acc[cu] = 0.0;
        }
    }
    return next;
}

} // namespace

Partition louvain(const Graph &g, double resolution, std::uint64_t rng_seed) {
    if (g.num_nodes() == 0)
        throw GraphError("louvain requires a non-empty graph");
    if (!(resolution > 0.0))
        throw GraphError("resolution must be positive");

    const std::size_t n = g.num_nodes();
    Partition result;
    result.assignment.resize(n);
    std::iota(result.assignment.begin(), result.assignment.end(), 0u);

    if (g.num_edges() == 0) {
        result.num_communities = n;
        result.modularity = 0.0;
        return result;
    }

    Rng rng(derive_seed(rng_seed, {0x4c6f7576ULL}));
    LevelGraph level = level_from_graph(g);
    result.pass_modularity.push_back(modularity(g, result.assignment, resolution));

    for (;;) {
        std::vector<std::uint32_t> community(level.size());
        std::iota(community.begin(), community.end(), 0u);
        if (!local_moving(level, resolution, rng, community))
            break;
        auto count = compact_labels(community);
        for (auto &c : result.assignment)
            c = community[c];
        result.pass_modularity.push_back(modularity(g, result.assignment, resolution));
        if (count == level.size())
            break;
        level = aggregate(level, community, count);
    }

    result.num_communities = compact_labels(result.assignment);
    result.modularity = modularity(g, result.assignment);
    return result;
}

void write_partition(const Graph &g, const Partition &p, std::ostream &out) {
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        out << g.original_id(v) << ' ' << p.assignment[v] << '\n';
}

double budget_value(const Graph &g, NodeId v) { return static_cast<double>(degree(g, v)); }

CandidatePool build_candidate_pool(const Graph &g, const Partition &p, std::size_t k,
                                   double pool_factor) {
    const std::size_t n = g.num_nodes();
    if (k < 1)
        throw GraphError("seed-set size must be at least 1");
    if (k > n)
        throw GraphError("seed-set size exceeds node count");
    if (!(pool_factor >= 1.0))
        throw GraphError("pool_factor must be >= 1");
    if (p.assignment.size() != n)
        throw GraphError("partition does not match graph");

    CandidatePool pool;
    pool.budget.resize(n);
    for (NodeId v = 0; v < n; ++v)
        pool.budget[v] = budget_value(g, v);
    auto ranks_before = [&](NodeId a, NodeId b) {
        if (pool.budget[a] != pool.budget[b])
            return pool.budget[a] > pool.budget[b];
        return a < b;
    };

    const auto pool_size =
        std::min(n, static_cast<std::size_t>(std::ceil(pool_factor * static_cast<double>(k))));

    std::vector<std::vector<NodeId>> members(p.num_communities);
    for (NodeId v = 0; v < n; ++v)
        members[p.assignment[v]].push_back(v);
    for (auto &m : members)
        std::sort(m.begin(), m.end(), ranks_before);

    std::vector<std::uint8_t> taken(n, 0), protect(n, 0);
    std::vector<NodeId> chosen;
    const double average = static_cast<double>(n) / static_cast<double>(p.num_communities);
    for (const auto &m : members) {
        if (m.empty())
            continue;
        auto share = static_cast<double>(pool_size) * static_cast<double>(m.size()) /
                     static_cast<double>(n);
        auto quota = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share)));
        quota = std::min(quota, m.size());
        for (std::size_t i = 0; i < quota; ++i) {
            taken[m[i]] = 1;
            chosen.push_back(m[i]);
        }
        if (static_cast<double>(m.size()) >= average)
            protect[m.front()] = 1;
    }

    std::sort(chosen.begin(), chosen.end(), ranks_before);
    if (chosen.size() > pool_size) {
        // Drop lowest-ranked nodes first, keeping one representative of each
        // large community as long as the pool can hold them.
        std::vector<NodeId> kept;
        std::size_t protected_count =
            std::count_if(chosen.begin(), chosen.end(), [&](NodeId v) { return protect[v]; });
        std::size_t drop = chosen.size() - pool_size;
        for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
            if (drop > 0 && (!protect[*it] || protected_count > pool_size)) {
                if (protect[*it])
                    --protected_count;
                --drop;
                continue;
            }
            kept.push_back(*it);
        }
        std::reverse(kept.begin(), kept.end());
        chosen = std::move(kept);
    } else if (chosen.size() < pool_size) {
        std::vector<NodeId> rest;
        for (NodeId v = 0; v < n; ++v)
            if (!taken[v])
                rest.push_back(v);
        std::sort(rest.begin(), rest.end(), ranks_before);
        rest.resize(pool_size - chosen.size());
        chosen.insert(chosen.end(), rest.begin(), rest.end());
        std::sort(chosen.begin(), chosen.end(), ranks_before);
    }
    pool.ranked = std::move(chosen);
    return pool;
}

} // namespace dqssa
