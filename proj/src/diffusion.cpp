#include "dqssa/diffusion.hpp"

#include "dqssa/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace dqssa {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("infection probability must lie in [0, 1]");
}

inline bool edge_live(std::uint64_t run_key, EdgeId e, double p) {
    return hash_uniform(run_key, e) < p;
}

} // namespace

CascadeSimulator::CascadeSimulator(const Graph &g) : g_(&g), stamp_(g.num_nodes(), 0) {
    queue_.reserve(g.num_nodes());
}

std::size_t CascadeSimulator::run(std::span<const NodeId> seeds, double p, std::uint64_t run_key) {
    const auto &g = *g_;
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    queue_.clear();
    for (auto s : seeds) {
        if (!g.contains(s))
            throw GraphError("seed node out of range");
        if (stamp_[s] != epoch_) {
            stamp_[s] = epoch_;
            queue_.push_back(s);
        }
    }
    // Each newly active node gets one attempt per inactive neighbour. An
    // undirected edge is attempted at most once, from whichever endpoint
    // activates first, so one coin per edge id is exact.
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const NodeId v = queue_[head];
        auto nbrs = g.neighbors(v);
        auto eids = g.incident_edges(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const NodeId u = nbrs[i];
            if (stamp_[u] == epoch_)
                continue;
            if (edge_live(run_key, eids[i], p)) {
                stamp_[u] = epoch_;
                queue_.push_back(u);
            }
        }
    }
    return queue_.size();
}

std::vector<NodeId> ic_single_run(const Graph &g, const SeedSet &s, double p,
                                  std::uint64_t run_key) {
    check_probability(p);
    std::vector<std::uint8_t> active(g.num_nodes(), 0);
    std::vector<NodeId> order;
    for (auto v : s.nodes()) {
        if (!g.contains(v))
            throw GraphError("seed node out of range");
        active[v] = 1;
        order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        const NodeId v = order[head];
        auto nbrs = g.neighbors(v);
        auto eids = g.incident_edges(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (!active[nbrs[i]] && edge_live(run_key, eids[i], p)) {
                active[nbrs[i]] = 1;
                order.push_back(nbrs[i]);
            }
        }
    }
    return order;
}

DiffusionResult fis(const Graph &g, const SeedSet &s, const DiffusionConfig &config) {
    check_probability(config.p);
    if (config.num_simulations < 1)
        throw std::invalid_argument("num_simulations must be at least 1");
    for (auto v : s.nodes())
        if (!g.contains(v))
            throw GraphError("seed node out of range");

    const auto start = std::chrono::steady_clock::now();
    const std::size_t runs = config.num_simulations;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(runs)));

    struct Partial {
        std::uint64_t sum = 0;
        std::uint64_t sum_sq = 0;
    };
    std::vector<Partial> partial(workers);
    auto work = [&](unsigned w) {
        CascadeSimulator sim(g);
        const std::size_t first = runs * w / workers, last = runs * (w + 1) / workers;
        Partial acc;
        for (std::size_t r = first; r < last; ++r) {
            std::uint64_t count = sim.run(s.nodes(), config.p, derive_seed(config.rng_seed, {r}));
            acc.sum += count;
            acc.sum_sq += count * count;
        }
        partial[w] = acc;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
    }

    std::uint64_t sum = 0, sum_sq = 0;
    for (const auto &pt : partial) {
        sum += pt.sum;
        sum_sq += pt.sum_sq;
    }
    const double n = static_cast<double>(g.num_nodes());
    const double r = static_cast<double>(runs);
    const double mean_count = static_cast<double>(sum) / r;
    const double var_count =
        std::max(0.0, static_cast<double>(sum_sq) / r - mean_count * mean_count);

    DiffusionResult result;
    result.fis_mean = mean_count / n;
    result.fis_variance = var_count / (n * n);
    result.samples = runs;
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

double exact_expected_spread(const Graph &g, const SeedSet &s, double p) {
    check_probability(p);
    const std::size_t m = g.num_edges();
    if (m > 20)
        throw std::invalid_argument("exact spread enumeration limited to 20 edges");
    const std::size_t n = g.num_nodes();
    std::vector<std::uint8_t> reached(n);
    std::vector<NodeId> stack;
    double expected = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        const int live = std::popcount(mask);
        const double weight = std::pow(p, live) * std::pow(1.0 - p, static_cast<int>(m) - live);
        if (weight == 0.0)
            continue;
        std::fill(reached.begin(), reached.end(), 0);
        stack.clear();
        for (auto v : s.nodes()) {
            reached[v] = 1;
            stack.push_back(v);
        }
        std::size_t count = stack.size();
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            auto nbrs = g.neighbors(v);
            auto eids = g.incident_edges(v);
            for (std::size_t i = 0; i < nbrs.size(); ++i)
                if (((mask >> eids[i]) & 1u) && !reached[nbrs[i]]) {
                    reached[nbrs[i]] = 1;
                    ++count;
                    stack.push_back(nbrs[i]);
                }
        }
        expected += weight * static_cast<double>(count);
    }
    return expected / static_cast<double>(n);
}

} // namespace dqssa
