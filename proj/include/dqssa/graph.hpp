#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dqssa {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

class GraphError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Immutable undirected simple graph in CSR form. Every adjacency list is
// sorted; each undirected edge carries a single id shared by both of its
// adjacency entries.
class Graph {
  public:
    Graph() = default;

    // Builds from an arbitrary edge list over [0, n). Self-loops are dropped
    // and duplicates collapsed. Endpoints >= n throw GraphError.
    Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
          std::string name = {}, std::vector<std::int64_t> original_ids = {});

    std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return num_edges_; }
    const std::string &name() const { return name_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    // Edge ids aligned with neighbors(v).
    std::span<const EdgeId> incident_edges(NodeId v) const {
        return {edge_ids_.data() + offsets_[v], edge_ids_.data() + offsets_[v + 1]};
    }
    std::size_t degree_unchecked(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
    std::span<const std::int64_t> original_ids() const { return original_ids_; }

    // Endpoints of every edge, indexed by EdgeId, with first < second.
    std::span<const std::pair<NodeId, NodeId>> edges() const { return edge_list_; }

    bool contains(NodeId v) const { return v < num_nodes(); }
    std::size_t max_degree() const;

    // Structural equality: same n and adjacency. Original ids are labels and
    // do not take part.
    bool operator==(const Graph &other) const;

  private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<EdgeId> edge_ids_;
    std::vector<std::pair<NodeId, NodeId>> edge_list_;
    std::vector<std::int64_t> original_ids_;
    std::size_t num_edges_ = 0;
    std::string name_;
};

enum class HeaderPolicy {
    Auto, // skip a Matrix Market size line when the banner is present
    None,
    SkipFirst,
};

struct DatasetDescriptor {
    std::filesystem::path path;
    int id_base = 1;
    std::string comment_prefixes = "%#";
    HeaderPolicy header = HeaderPolicy::Auto;
    std::string name;
};

struct LoadReport {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
    std::size_t lines_read = 0;
};

Graph load_edge_list(const DatasetDescriptor &descriptor, LoadReport *report = nullptr);
Graph parse_edge_list(std::istream &in, const DatasetDescriptor &descriptor,
                      LoadReport *report = nullptr);

// Canonical form: "# dqssa-edgelist n=<n> m=<m>" header followed by
// 0-based "u v" lines with u < v in sorted order. Reloading with id_base 0
// reproduces the graph including isolated nodes.
void write_canonical_edge_list(const Graph &g, std::ostream &out);
void write_canonical_edge_list(const Graph &g, const std::filesystem::path &path);

std::size_t degree(const Graph &g, NodeId v);

// hops == 1: neighbors of s outside s. hops == 2: neighbors of the one-hop
// set outside s and the one-hop set. Result is sorted.
std::vector<NodeId> neighborhood(const Graph &g, std::span<const NodeId> s, int hops);

// Checks adjacency symmetry, sortedness, absence of loops/duplicates and
// that degrees sum to 2m.
bool check_invariants(const Graph &g);

} // namespace dqssa
