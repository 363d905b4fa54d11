#ifndef CRITFOREST_SAMPLERS_HPP
#define CRITFOREST_SAMPLERS_HPP

#include <cstdint>
#include <optional>

#include "crf/forest_counts.hpp"
#include "crf/graph.hpp"
#include "crf/rng.hpp"

namespace crf {

enum class ForestStrategy { Auto, Exact, Rejection };

/// Uniform labelled tree on k vertices via a uniform random sequence decoded
/// with the standard bijection (k <= 2 handled directly).
Forest sample_uniform_tree(std::int64_t k, Rng& rng);

/// G(n,p): each of the C(n,2) edge slots is kept independently; slots are
/// walked with geometric skips so the cost is O(n + edges).
Graph sample_gnp(std::int64_t n, double p, Rng& rng);

/// G(n,m): a uniform m-subset of edge slots (Floyd's algorithm, duplicates
/// impossible by construction).
Graph sample_gnm(std::int64_t n, std::int64_t m, Rng& rng);

/// Monotone coupling across edge probabilities: one uniform per edge slot,
/// thresholded at each p, so the graph at p is contained in the graph at
/// q > p. O(n^2) work; intended for moderate n. probs need not be sorted;
/// outputs match the input order.
std::vector<Graph> sample_gnp_nested(std::int64_t n, const std::vector<double>& probs, Rng& rng);

/// Uniform forest on n vertices with exactly m edges.
///  - Exact: samples the size of the component containing the smallest
///    unplaced label with weight C(n-1,k-1) k^{k-2} f(n-k,m-k+1), attaches a
///    uniform tree on the chosen labels, recurses. Needs the count table.
///  - Rejection: draws G(n,m) until acyclic.
///  - Auto: exact when a table is supplied and covers n, rejection otherwise.
Forest sample_forest_nm(const ForestCountTable* table, std::int64_t n, std::int64_t m, Rng& rng,
                        ForestStrategy strategy = ForestStrategy::Auto,
                        std::int64_t max_attempts = 100000000);

/// Uniform forest conditioned from G(n,p): exact path draws the edge count M
/// with P(M=m) proportional to f(n,m) (p/(1-p))^m and defers to
/// sample_forest_nm; rejection path draws G(n,p) until acyclic.
Forest sample_forest_np(const ForestCountTable* table, std::int64_t n, double p, Rng& rng,
                        ForestStrategy strategy = ForestStrategy::Auto,
                        std::int64_t max_attempts = 100000000);

/// Rejection embedding: the accepted G(n,p) draw is returned both as the
/// ambient graph and as the forest, so edge containment holds by
/// construction. (The marginal of `ambient` is G(n,p) conditioned acyclic,
/// not G(n,p); this is the implemented witness for the containment coupling.)
struct EmbeddedForest {
    Forest forest;
    Graph ambient;
    std::int64_t attempts = 0;
};
EmbeddedForest sample_forest_np_embedded(std::int64_t n, double p, Rng& rng,
                                         std::int64_t max_attempts = 100000000);

/// Upper bound (2kS^2/n^2) / (1 - 2kS^2/n^2) on the probability that adding k
/// uniform edges (self/repeat draws allowed) to a forest with component
/// square sum S^2 creates a cycle. Throws DomainError when 2kS^2/n^2 >= 1.
double sequential_cycle_bound(double s2, std::int64_t k, std::int64_t n);

/// Nearly monotone coupling of F(n,p^-), F(n,m), F(n,p^+) where
/// n^2 p^-/2 = m - margin and n^2 p^+/2 = m + margin with
/// margin = ceil(n^{3/5}), clamped to keep 0 < p^- and p^+ < 1 (at small n
/// the unclamped margin can exceed m itself).
///
/// Draws M^- and M^+ as the edge counts of independent F(n,p^-), F(n,p^+)
/// samples. When M^- < m < M^+, grows the F(n,M^-) sample by uniform edge
/// additions; members past the first cycle event are replaced by fresh
/// independent samples, which keeps every marginal exact. `monotone` is true
/// iff the ordering held and no cycle event occurred through M^+, in which
/// case lower ⊆ middle ⊆ upper edge-by-edge.
struct CoupledTriple {
    Forest lower;
    Forest middle;
    Forest upper;
    bool monotone = false;
};
CoupledTriple almost_monotone_triple(std::int64_t n, std::int64_t m, Rng& rng,
                                     std::int64_t max_attempts = 100000000);

} // namespace crf

#endif
