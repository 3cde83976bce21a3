#pragma once

// Graph builders and brute-force oracles shared by the test binaries. The
// oracles are written directly from the definitions with std::set and dense
// linear algebra and share no code with the library paths they check.

#include "dqssa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using dqssa::Graph;
using dqssa::NodeId;
using Edges = std::vector<std::pair<NodeId, NodeId>>;

inline Graph make_graph(std::size_t n, const Edges &e) { return Graph(n, e); }

inline Graph path_graph(std::size_t n) {
    Edges e;
    for (NodeId i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Graph(n, e);
}

inline Graph cycle_graph(std::size_t n) {
    Edges e;
    for (NodeId i = 0; i < n; ++i)
        e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return Graph(n, e);
}

inline Graph complete_graph(std::size_t n) {
    Edges e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return Graph(n, e);
}

// Node 0 is the centre.
inline Graph star_graph(std::size_t leaves) {
    Edges e;
    for (NodeId i = 1; i <= leaves; ++i)
        e.emplace_back(0, i);
    return Graph(leaves + 1, e);
}

inline Graph two_triangles() { return Graph(6, Edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

// G(n, q) with a fixed seed.
inline Graph random_graph(std::size_t n, double q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(q);
    Edges e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng))
                e.emplace_back(i, j);
    return Graph(n, e);
}

// Random graph with exactly m distinct edges (m <= n(n-1)/2).
inline Graph random_graph_m(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Edges all;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            all.emplace_back(i, j);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(m, all.size()));
    return Graph(n, all);
}

inline std::set<NodeId> neighbor_set(const Graph &g, NodeId v) {
    auto adj = g.neighbors(v);
    return {adj.begin(), adj.end()};
}

// LIE straight from the formula.
inline double lie_oracle(const Graph &g, const std::vector<NodeId> &seeds, double p) {
    std::set<NodeId> s(seeds.begin(), seeds.end());
    std::set<NodeId> frontier;
    for (auto v : s)
        for (auto u : neighbor_set(g, v))
            if (!s.count(u))
                frontier.insert(u);
    double value = static_cast<double>(s.size());
    for (auto u : frontier) {
        int c = 0, d2 = 0;
        for (auto w : neighbor_set(g, u)) {
            if (s.count(w))
                ++c;
            else if (!frontier.count(w))
                ++d2;
        }
        value += (1.0 - std::pow(1.0 - p, c)) * (1.0 + p * d2);
    }
    return value;
}

// Best LIE over all k-subsets of {0..n-1} for k <= 2.
inline double best_lie_oracle(const Graph &g, std::size_t k, double p) {
    double best = -1.0;
    const auto n = static_cast<NodeId>(g.num_nodes());
    if (k == 1) {
        for (NodeId a = 0; a < n; ++a)
            best = std::max(best, lie_oracle(g, {a}, p));
    } else {
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                best = std::max(best, lie_oracle(g, {a, b}, p));
    }
    return best;
}

// PageRank by Gaussian elimination on (I - d M) x = (1-d)/n * 1, with
// dangling columns replaced by uniform 1/n.
inline std::vector<double> pagerank_oracle(const Graph &g, double d) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        a[i][n] = (1.0 - d) / static_cast<double>(n);
    }
    for (NodeId u = 0; u < n; ++u) {
        auto deg = g.neighbors(u).size();
        if (deg == 0) {
            for (std::size_t i = 0; i < n; ++i)
                a[i][u] -= d / static_cast<double>(n);
        } else {
            for (auto v : g.neighbors(u))
                a[v][u] -= d / static_cast<double>(deg);
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a[i][n] / a[i][i];
    return x;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string &tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("dqssa_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path write(const std::string &name, const std::string &content) const {
        auto p = path / name;
        std::ofstream(p) << content;
        return p;
    }
};

} // namespace testing
