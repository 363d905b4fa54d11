#include "crf/graph.hpp"

#include <algorithm>

namespace crf {

std::vector<std::vector<std::int32_t>> Graph::adjacency() const {
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n_vertices));
    for (const Edge& e : edges) {
        adj[static_cast<std::size_t>(e.first)].push_back(e.second);
        adj[static_cast<std::size_t>(e.second)].push_back(e.first);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

bool is_forest(const Graph& g) {
    UnionFind uf(g.n_vertices);
    std::vector<Edge> seen;
    seen.reserve(g.edges.size());
    for (const Edge& e : g.edges)
        seen.emplace_back(std::min(e.first, e.second), std::max(e.first, e.second));
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) {
        const Edge& e = seen[i];
        if (e.first == e.second) return false;
        if (e.first < 0 || e.second >= g.n_vertices) return false;
        if (i > 0 && seen[i] == seen[i - 1]) return false;
        if (!uf.unite(e.first, e.second)) return false;
    }
    return true;
}

std::vector<std::int64_t> component_sizes(const Graph& g) {
    UnionFind uf(g.n_vertices);
    for (const Edge& e : g.edges) uf.unite(e.first, e.second);
    std::vector<std::int64_t> size_of_root(static_cast<std::size_t>(g.n_vertices), 0);
    for (std::int64_t v = 0; v < g.n_vertices; ++v)
        size_of_root[static_cast<std::size_t>(uf.find(static_cast<std::int32_t>(v)))] += 1;
    std::vector<std::int64_t> sizes;
    for (std::int64_t s : size_of_root)
        if (s > 0) sizes.push_back(s);
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

double component_square_sum(const Graph& g) {
    double s2 = 0.0;
    for (std::int64_t s : component_sizes(g)) s2 += static_cast<double>(s) * static_cast<double>(s);
    return s2;
}

std::vector<std::int64_t> canonical_edge_key(const Graph& g) {
    std::vector<std::int64_t> key;
    key.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        std::int64_t a = std::min(e.first, e.second);
        std::int64_t b = std::max(e.first, e.second);
        key.push_back(a * g.n_vertices + b);
    }
    std::sort(key.begin(), key.end());
    return key;
}

} // namespace crf
