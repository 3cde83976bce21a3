#include "dqssa/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string_view>

namespace dqssa {

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
             std::string name, std::vector<std::int64_t> original_ids)
    : name_(std::move(name)) {
    std::vector<std::pair<NodeId, NodeId>> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= n || v >= n)
            throw GraphError("edge endpoint out of range");
        if (u == v)
            continue;
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    edge_list_ = std::move(canon);
    num_edges_ = edge_list_.size();

    offsets_.assign(n + 1, 0);
    for (auto [u, v] : edge_list_) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
        offsets_[i + 1] += offsets_[i];

    neighbors_.resize(2 * num_edges_);
    edge_ids_.resize(2 * num_edges_);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v): placing each node's smaller neighbors
    // first, then its larger ones, leaves every adjacency list sorted.
    for (EdgeId e = 0; e < edge_list_.size(); ++e) {
        auto [u, v] = edge_list_[e];
        neighbors_[cursor[v]] = u;
        edge_ids_[cursor[v]++] = e;
    }
    for (EdgeId e = 0; e < edge_list_.size(); ++e) {
        auto [u, v] = edge_list_[e];
        neighbors_[cursor[u]] = v;
        edge_ids_[cursor[u]++] = e;
    }

    if (original_ids.empty()) {
        original_ids_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            original_ids_[i] = static_cast<std::int64_t>(i);
    } else {
        if (original_ids.size() != n)
            throw GraphError("original id table size does not match node count");
        original_ids_ = std::move(original_ids);
    }
}

std::size_t Graph::max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < num_nodes(); ++v)
        best = std::max(best, degree_unchecked(static_cast<NodeId>(v)));
    return best;
}

bool Graph::operator==(const Graph &other) const {
    return offsets_ == other.offsets_ && neighbors_ == other.neighbors_;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' ||
                                   line[i] == ','))
            ++i;
        auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != ',')
            ++i;
        if (i > start)
            fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_int(std::string_view s, std::int64_t &out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_number(std::string_view s) {
    double d;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    return ec == std::errc() && ptr == s.data() + s.size();
}

constexpr std::string_view canonical_tag = "# dqssa-edgelist";

} // namespace

Graph parse_edge_list(std::istream &in, const DatasetDescriptor &descriptor, LoadReport *report) {
    if (descriptor.id_base != 0 && descriptor.id_base != 1)
        throw GraphError("id_base must be 0 or 1");

    LoadReport local;
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::int64_t declared_nodes = -1;
    bool matrix_market = false;
    bool header_pending = descriptor.header != HeaderPolicy::None;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("%%MatrixMarket"))
            matrix_market = true;
        if (view.starts_with(canonical_tag)) {
            auto pos = view.find("n=");
            std::int64_t n = -1;
            if (pos != std::string_view::npos) {
                auto rest = view.substr(pos + 2);
                auto end = rest.find_first_of(" \t\r");
                if (!parse_int(rest.substr(0, end), n))
                    n = -1;
            }
            declared_nodes = n;
            continue;
        }
        auto first = view.find_first_not_of(" \t\r");
        if (first == std::string_view::npos)
            continue;
        if (descriptor.comment_prefixes.find(view[first]) != std::string::npos)
            continue;

        auto fields = split_fields(view);
        if (header_pending) {
            header_pending = false;
            bool skip = descriptor.header == HeaderPolicy::SkipFirst ||
                        (descriptor.header == HeaderPolicy::Auto && matrix_market &&
                         fields.size() == 3);
            if (skip)
                continue;
        }
        if (fields.size() < 2 || fields.size() > 4)
            throw GraphError("unparseable line " + std::to_string(line_no) + ": '" + line + "'");
        std::int64_t u, v;
        if (!parse_int(fields[0], u) || !parse_int(fields[1], v))
            throw GraphError("unparseable line " + std::to_string(line_no) + ": '" + line + "'");
        for (std::size_t f = 2; f < fields.size(); ++f)
            if (!parse_number(fields[f]))
                throw GraphError("unparseable line " + std::to_string(line_no) + ": '" + line +
                                 "'");
        if (u < descriptor.id_base || v < descriptor.id_base)
            throw GraphError("node id below id_base on line " + std::to_string(line_no));
        raw.emplace_back(u, v);
        ++local.lines_read;
    }

    // Contiguous remap in ascending original-id order.
    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [u, v] : raw) {
        ids.push_back(u);
        ids.push_back(v);
    }
    if (declared_nodes > 0 && descriptor.id_base == 0) {
        for (std::int64_t i = 0; i < declared_nodes; ++i)
            ids.push_back(i);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty())
        throw GraphError("empty graph");

    auto index_of = [&](std::int64_t id) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) {
        if (u == v) {
            ++local.self_loops_dropped;
            continue;
        }
        edges.emplace_back(index_of(u), index_of(v));
    }
    std::string name = descriptor.name;
    if (name.empty() && !descriptor.path.empty())
        name = descriptor.path.stem().string();
    const std::size_t n = ids.size();
    Graph g(n, edges, std::move(name), std::move(ids));
    local.duplicates_collapsed = edges.size() - g.num_edges();
    if (local.self_loops_dropped > 0)
        std::clog << "warning: dropped " << local.self_loops_dropped << " self-loop(s) in "
                  << (g.name().empty() ? std::string("<stream>") : g.name()) << '\n';
    if (report)
        *report = local;
    return g;
}

Graph load_edge_list(const DatasetDescriptor &descriptor, LoadReport *report) {
    std::ifstream in(descriptor.path);
    if (!in)
        throw GraphError("cannot open edge list: " + descriptor.path.string());
    return parse_edge_list(in, descriptor, report);
}

void write_canonical_edge_list(const Graph &g, std::ostream &out) {
    out << canonical_tag << " n=" << g.num_nodes() << " m=" << g.num_edges() << '\n';
    for (auto [u, v] : g.edges())
        out << u << ' ' << v << '\n';
}

void write_canonical_edge_list(const Graph &g, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw GraphError("cannot write edge list: " + path.string());
    write_canonical_edge_list(g, out);
}

std::size_t degree(const Graph &g, NodeId v) {
    if (!g.contains(v))
        throw GraphError("node " + std::to_string(v) + " out of range");
    return g.degree_unchecked(v);
}

std::vector<NodeId> neighborhood(const Graph &g, std::span<const NodeId> s, int hops) {
    if (hops != 1 && hops != 2)
        throw GraphError("hops must be 1 or 2");
    std::vector<std::uint8_t> mark(g.num_nodes(), 0); // 1 = seed, 2 = one hop, 3 = two hops
    for (auto v : s) {
        if (!g.contains(v))
            throw GraphError("node " + std::to_string(v) + " out of range");
        mark[v] = 1;
    }
    std::vector<NodeId> one_hop;
    for (auto v : s)
        for (auto u : g.neighbors(v))
            if (mark[u] == 0) {
                mark[u] = 2;
                one_hop.push_back(u);
            }
    if (hops == 1) {
        std::sort(one_hop.begin(), one_hop.end());
        return one_hop;
    }
    std::vector<NodeId> two_hop;
    for (auto v : one_hop)
        for (auto u : g.neighbors(v))
            if (mark[u] == 0) {
                mark[u] = 3;
                two_hop.push_back(u);
            }
    std::sort(two_hop.begin(), two_hop.end());
    return two_hop;
}

bool check_invariants(const Graph &g) {
    std::size_t degree_sum = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        auto adj = g.neighbors(v);
        degree_sum += adj.size();
        for (std::size_t i = 0; i < adj.size(); ++i) {
            if (adj[i] == v || adj[i] >= g.num_nodes())
                return false;
            if (i > 0 && adj[i - 1] >= adj[i])
                return false;
            auto back = g.neighbors(adj[i]);
            if (!std::binary_search(back.begin(), back.end(), v))
                return false;
        }
    }
    return degree_sum == 2 * g.num_edges();
}

} // namespace dqssa
