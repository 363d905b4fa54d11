#ifndef CRITFOREST_GRAPH_HPP
#define CRITFOREST_GRAPH_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace crf {

using Edge = std::pair<std::int32_t, std::int32_t>; // 0-based, first < second

/// Simple undirected graph on vertices {0, ..., n-1} held as an edge list.
struct Graph {
    std::int64_t n_vertices = 0;
    std::vector<Edge> edges;

    /// Sorted adjacency lists (neighbours in increasing label order).
    std::vector<std::vector<std::int32_t>> adjacency() const;
};

/// A graph that is promised acyclic. The promise is checked by
/// validate_forest, which every sampler output passes in test mode.
struct Forest : Graph {};

/// Union-find over {0,...,n-1} with path halving; used for cycle detection
/// during incremental edge insertion.
class UnionFind {
public:
    explicit UnionFind(std::int64_t n) : parent_(static_cast<std::size_t>(n)), size_(n, 1) {
        for (std::int64_t i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t v) {
        while (parent_[static_cast<std::size_t>(v)] != v) {
            parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
            v = parent_[static_cast<std::size_t>(v)];
        }
        return v;
    }
    /// False iff u and v were already connected (the new edge closes a cycle).
    bool unite(std::int32_t u, std::int32_t v) {
        std::int32_t ru = find(u), rv = find(v);
        if (ru == rv) return false;
        if (size_[static_cast<std::size_t>(ru)] < size_[static_cast<std::size_t>(rv)]) std::swap(ru, rv);
        parent_[static_cast<std::size_t>(rv)] = ru;
        size_[static_cast<std::size_t>(ru)] += size_[static_cast<std::size_t>(rv)];
        return true;
    }
    std::int64_t component_size(std::int32_t v) { return size_[static_cast<std::size_t>(find(v))]; }

private:
    std::vector<std::int32_t> parent_;
    std::vector<std::int64_t> size_;
};

/// True iff `g` is a simple forest: no self-edges, no repeats, no cycles.
bool is_forest(const Graph& g);

/// Component sizes, non-increasing.
std::vector<std::int64_t> component_sizes(const Graph& g);

/// Sum of squared component sizes, S^2(g).
double component_square_sum(const Graph& g);

/// Canonical key (sorted edge list as packed ints) for chi-square bucketing
/// of whole graphs at small n.
std::vector<std::int64_t> canonical_edge_key(const Graph& g);

} // namespace crf

#endif
