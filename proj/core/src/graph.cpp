#include "modkcsp/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>

namespace modkcsp {

int Graph::add_vertex(const std::string& label) {
    if (label.empty()) throw InputError("empty vertex label");
    auto [it, inserted] = label_index_.emplace(label, num_vertices());
    if (!inserted) throw InputError("duplicate vertex label '" + label + "'");
    labels_.push_back(label);
    adjacency_.emplace_back();
    return it->second;
}

int Graph::vertex_index(const std::string& label) const {
    auto it = label_index_.find(label);
    return it == label_index_.end() ? -1 : it->second;
}

void Graph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices())
        throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop at vertex '" + label(u) + "'");
    auto [it, inserted] = edges_.emplace(std::min(u, v), std::max(u, v));
    if (!inserted) return;  // duplicate edges collapse
    adjacency_[static_cast<size_t>(u)].push_back(v);
    adjacency_[static_cast<size_t>(v)].push_back(u);
}

void Graph::add_edge(const std::string& u, const std::string& v) {
    int ui = vertex_index(u), vi = vertex_index(v);
    if (ui < 0) throw InputError("unknown vertex '" + u + "'");
    if (vi < 0) throw InputError("unknown vertex '" + v + "'");
    add_edge(ui, vi);
}

bool Graph::has_edge(int u, int v) const {
    return edges_.count({std::min(u, v), std::max(u, v)}) != 0;
}

Graph Graph::induced(const std::vector<int>& vertices) const {
    Graph sub;
    std::map<int, int> remap;
    for (int v : vertices) {
        if (v < 0 || v >= num_vertices()) throw InputError("vertex index out of range");
        remap[v] = sub.add_vertex(label(v));
    }
    for (auto [u, v] : edges_) {
        auto iu = remap.find(u), iv = remap.find(v);
        if (iu != remap.end() && iv != remap.end()) sub.add_edge(iu->second, iv->second);
    }
    return sub;
}

namespace {

// Branch-and-factor counter over <=64-vertex masks. Counts fit in uint64
// because an n-vertex graph has at most 2^n <= 2^63 independent sets here.
class IsCounter {
  public:
    explicit IsCounter(const Graph& g) : adj_(static_cast<size_t>(g.num_vertices()), 0) {
        // Branch order: by degree, ties by label; precompute label ranks.
        int n = g.num_vertices();
        std::vector<int> by_label(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) by_label[static_cast<size_t>(i)] = i;
        std::sort(by_label.begin(), by_label.end(),
                  [&](int a, int b) { return g.label(a) < g.label(b); });
        label_rank_.resize(static_cast<size_t>(n));
        for (int r = 0; r < n; ++r) label_rank_[static_cast<size_t>(by_label[static_cast<size_t>(r)])] = r;
        for (auto [u, v] : g.edges()) {
            adj_[static_cast<size_t>(u)] |= std::uint64_t{1} << v;
            adj_[static_cast<size_t>(v)] |= std::uint64_t{1} << u;
        }
        full_ = adj_.empty() ? 0 : (n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    std::uint64_t count() { return count_mask(full_); }

  private:
    std::uint64_t component_of(int start, std::uint64_t mask) const {
        std::uint64_t comp = std::uint64_t{1} << start;
        std::uint64_t frontier = comp;
        while (frontier) {
            std::uint64_t next = 0;
            std::uint64_t f = frontier;
            while (f) {
                int v = std::countr_zero(f);
                f &= f - 1;
                next |= adj_[static_cast<size_t>(v)] & mask & ~comp;
            }
            comp |= next;
            frontier = next;
        }
        return comp;
    }

    std::uint64_t count_mask(std::uint64_t mask) {
        if (mask == 0) return 1;
        std::uint64_t comp = component_of(std::countr_zero(mask), mask);
        if (comp != mask) return count_mask(comp) * count_mask(mask & ~comp);
        // Single component: branch on the highest-degree vertex.
        int best = -1, best_deg = -1;
        std::uint64_t m = mask;
        while (m) {
            int v = std::countr_zero(m);
            m &= m - 1;
            int deg = std::popcount(adj_[static_cast<size_t>(v)] & mask);
            if (deg > best_deg ||
                (deg == best_deg && label_rank_[static_cast<size_t>(v)] <
                                        label_rank_[static_cast<size_t>(best)])) {
                best = v;
                best_deg = deg;
            }
        }
        if (best_deg == 0) return std::uint64_t{1} << std::popcount(mask);
        std::uint64_t without = mask & ~(std::uint64_t{1} << best);
        std::uint64_t excluded = without & ~adj_[static_cast<size_t>(best)];
        return count_mask(without) + count_mask(excluded);
    }

    std::vector<std::uint64_t> adj_;
    std::vector<int> label_rank_;
    std::uint64_t full_ = 0;
};

}  // namespace

BigInt count_is(const Graph& g, int cap) {
    if (g.num_vertices() > cap || g.num_vertices() > 63)
        throw ResourceError("graph has " + std::to_string(g.num_vertices()) +
                            " vertices, independent-set cap is " +
                            std::to_string(std::min(cap, 63)));
    if (g.num_vertices() == 0) return 1;
    IsCounter counter(g);
    return BigInt(counter.count());
}

std::uint64_t count_is_mod(const Graph& g, Modulus m, int cap) {
    return static_cast<std::uint64_t>(count_is(g, cap) % m.value());
}

BigInt count_is_naive(const Graph& g, int cap) {
    int n = g.num_vertices();
    if (n > cap)
        throw ResourceError("graph has " + std::to_string(n) + " vertices, naive cap is " +
                            std::to_string(cap));
    std::vector<std::uint64_t> adj(static_cast<size_t>(n), 0);
    for (auto [u, v] : g.edges()) {
        adj[static_cast<size_t>(u)] |= std::uint64_t{1} << v;
        adj[static_cast<size_t>(v)] |= std::uint64_t{1} << u;
    }
    std::uint64_t count = 0;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
        bool independent = true;
        for (std::uint64_t s = subset; s; s &= s - 1) {
            int v = std::countr_zero(s);
            if (adj[static_cast<size_t>(v)] & subset) {
                independent = false;
                break;
            }
        }
        if (independent) ++count;
    }
    return BigInt(count);
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> bipartition(const Graph& g) {
    std::vector<int> color(static_cast<size_t>(g.num_vertices()), -1);
    for (int start = 0; start < g.num_vertices(); ++start) {
        if (color[static_cast<size_t>(start)] != -1) continue;
        color[static_cast<size_t>(start)] = 0;
        std::queue<int> queue;
        queue.push(start);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop();
            for (int v : g.neighbors(u)) {
                if (color[static_cast<size_t>(v)] == -1) {
                    color[static_cast<size_t>(v)] = 1 - color[static_cast<size_t>(u)];
                    queue.push(v);
                } else if (color[static_cast<size_t>(v)] == color[static_cast<size_t>(u)]) {
                    return std::nullopt;
                }
            }
        }
    }
    std::pair<std::vector<int>, std::vector<int>> parts;
    for (int v = 0; v < g.num_vertices(); ++v)
        (color[static_cast<size_t>(v)] == 0 ? parts.first : parts.second).push_back(v);
    return parts;
}

}  // namespace modkcsp
