#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modkcsp/counting.hpp"

namespace modkcsp {

/// Undirected graph with uniquely labeled vertices. No self-loops, no
/// duplicate edges. Edges are kept sorted by index pair, so iteration and
/// serialization are deterministic.
class Graph {
  public:
    Graph() = default;

    int add_vertex(const std::string& label);
    int vertex_index(const std::string& label) const;  // -1 if absent
    void add_edge(int u, int v);
    void add_edge(const std::string& u, const std::string& v);
    bool has_edge(int u, int v) const;

    int num_vertices() const { return static_cast<int>(labels_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const { return labels_[static_cast<size_t>(v)]; }
    const std::set<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<size_t>(v)]; }

    /// Subgraph induced by the given vertices, relabeled with the originals.
    Graph induced(const std::vector<int>& vertices) const;

  private:
    std::vector<std::string> labels_;
    std::map<std::string, int> label_index_;
    std::set<std::pair<int, int>> edges_;  // (min, max) pairs
    std::vector<std::vector<int>> adjacency_;
};

constexpr int kDefaultGraphCap = 40;
constexpr int kNaiveGraphCap = 26;

/// Exact independent-set count (the empty set included). Branches on the
/// highest-degree vertex, with ties broken by label, and factors over
/// connected components. Throws ResourceError above the cap.
BigInt count_is(const Graph& g, int cap = kDefaultGraphCap);
std::uint64_t count_is_mod(const Graph& g, Modulus m, int cap = kDefaultGraphCap);

/// Subset-enumeration oracle for count_is; deliberately unclever.
BigInt count_is_naive(const Graph& g, int cap = kNaiveGraphCap);

/// A 2-coloring as (left, right) vertex index lists, or nullopt if the graph
/// has an odd cycle. BFS from each lowest-index uncolored vertex, so the
/// split is deterministic.
std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition(const Graph& g);

inline bool is_bipartite(const Graph& g) { return bipartition(g).has_value(); }

}  // namespace modkcsp
