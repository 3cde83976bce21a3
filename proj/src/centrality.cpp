#include "dqssa/centrality.hpp"

#include "dqssa/simd.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace dqssa {

std::string_view to_string(CentralityMethod m) {
    switch (m) {
    case CentralityMethod::HI: return "HI";
    case CentralityMethod::GLR: return "GLR";
    case CentralityMethod::PR: return "PR";
    case CentralityMethod::ENC: return "ENC";
    }
    return "?";
}

std::optional<CentralityMethod> parse_centrality(std::string_view name) {
    for (auto m : {CentralityMethod::HI, CentralityMethod::GLR, CentralityMethod::PR,
                   CentralityMethod::ENC})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

ScoreVector pagerank(const Graph &g, double damping, double tol, std::size_t max_iter) {
    const std::size_t n = g.num_nodes();
    if (n == 0)
        throw GraphError("pagerank requires a non-empty graph");
    const auto &kern = simd::kernels();
    const double nd = static_cast<double>(n);

    std::vector<double> rank(n, 1.0 / nd), next(n), share(n), inv_degree(n, 0.0);
    std::vector<NodeId> dangling;
    for (NodeId v = 0; v < n; ++v) {
        auto d = g.degree_unchecked(v);
        if (d == 0)
            dangling.push_back(v);
        else
            inv_degree[v] = 1.0 / static_cast<double>(d);
    }

    ScoreVector out;
    out.method = CentralityMethod::PR;
    out.converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
        kern.multiply(rank, inv_degree, share);
        double dangling_mass = 0.0;
        for (auto v : dangling)
            dangling_mass += rank[v];
        const double base = (1.0 - damping) / nd + damping * dangling_mass / nd;
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            for (auto u : g.neighbors(v))
                acc += share[u];
            next[v] = base + damping * acc;
        }
        // Renormalise against drift so the mass stays at 1.
        const double total = kern.sum(next);
        for (auto &x : next)
            x /= total;
        const double change = kern.l1_distance(next, rank);
        rank.swap(next);
        out.iterations = it + 1;
        if (change < tol) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged)
        std::clog << "warning: pagerank did not converge in " << max_iter << " iterations\n";
    out.scores = std::move(rank);
    return out;
}

ScoreVector h_index(const Graph &g) {
    ScoreVector out;
    out.method = CentralityMethod::HI;
    out.scores.resize(g.num_nodes());
    std::vector<std::size_t> degs;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        degs.clear();
        for (auto u : g.neighbors(v))
            degs.push_back(g.degree_unchecked(u));
        std::sort(degs.begin(), degs.end(), std::greater<>());
        std::size_t h = 0;
        while (h < degs.size() && degs[h] >= h + 1)
            ++h;
        out.scores[v] = static_cast<double>(h);
    }
    return out;
}

std::vector<std::uint32_t> k_shell(const Graph &g) {
    // Batagelj-Zaversnik O(m) core decomposition.
    const std::size_t n = g.num_nodes();
    std::vector<std::uint32_t> deg(n), core(n);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(g.degree_unchecked(v));
        max_deg = std::max<std::size_t>(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (auto d : deg)
        ++bin[d];
    std::size_t start = 0;
    for (auto &b : bin) {
        auto count = b;
        b = start;
        start += count;
    }
    std::vector<NodeId> vert(n);
    std::vector<std::size_t> pos(n);
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d > 0; --d)
        bin[d] = bin[d - 1];
    if (!bin.empty())
        bin[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        NodeId v = vert[i];
        core[v] = deg[v];
        for (auto u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                auto du = deg[u];
                auto pu = pos[u];
                auto pw = bin[du];
                NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return core;
}

ScoreVector enc(const Graph &g) {
    const auto shell = k_shell(g);
    const std::size_t n = g.num_nodes();
    std::vector<double> cnc(n, 0.0);
    for (NodeId v = 0; v < n; ++v)
        for (auto u : g.neighbors(v))
            cnc[v] += shell[u];
    ScoreVector out;
    out.method = CentralityMethod::ENC;
    out.scores.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v)
        for (auto u : g.neighbors(v))
            out.scores[v] += cnc[u];
    return out;
}

ScoreVector glr(const Graph &g, const Partition &p, double gamma) {
    if (p.assignment.size() != g.num_nodes())
        throw GraphError("partition does not match graph");
    ScoreVector out;
    out.method = CentralityMethod::GLR;
    out.scores.resize(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        std::size_t bridges = 0;
        for (auto u : g.neighbors(v))
            bridges += p.assignment[u] != p.assignment[v];
        out.scores[v] = static_cast<double>(g.degree_unchecked(v)) +
                        gamma * static_cast<double>(bridges);
    }
    return out;
}

SeedSet top_k_seeds(const Graph &g, const ScoreVector &scores, std::size_t k) {
    const std::size_t n = g.num_nodes();
    if (k > n)
        throw GraphError("k exceeds node count");
    if (scores.scores.size() != n)
        throw GraphError("score vector does not match graph");
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](NodeId a, NodeId b) {
                          if (scores.scores[a] != scores.scores[b])
                              return scores.scores[a] > scores.scores[b];
                          return g.original_id(a) < g.original_id(b);
                      });
    order.resize(k);
    return SeedSet(std::move(order));
}

void write_scores_csv(const Graph &g, const ScoreVector &scores, std::ostream &out) {
    out << "original_id,score\n";
    auto precision = out.precision(17);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        out << g.original_id(v) << ',' << scores.scores[v] << '\n';
    out.precision(precision);
}

} // namespace dqssa
