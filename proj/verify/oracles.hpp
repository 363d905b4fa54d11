#ifndef CRITFOREST_VERIFY_ORACLES_HPP
#define CRITFOREST_VERIFY_ORACLES_HPP

// Independent oracles used by tests and the acceptance suite. Everything here
// recomputes quantities by routes the library under test does not share:
// exhaustive graph enumeration, Monte Carlo integration, and direct bridge
// constructions.

#include <cstdint>
#include <map>
#include <vector>

#include "crf/graph.hpp"
#include "crf/rng.hpp"

namespace crf::oracle {

/// All 2^C(n,2) graphs on n vertices, as edge masks. n <= 6 keeps this small.
std::vector<Graph> all_graphs(std::int64_t n);

/// Exact number of forests on [n] with m edges, by exhaustive enumeration.
std::int64_t forest_count_by_enumeration(std::int64_t n, std::int64_t m);

/// All forests on [n] with m edges.
std::vector<Forest> all_forests(std::int64_t n, std::int64_t m);

/// P(G(n,p) acyclic) as a sum of graph weights over the enumeration.
double acyclic_prob_by_enumeration(std::int64_t n, double p);

/// P(G(n,p) in A_{n,r,k}): [r] separated (0-based vertices {0..r-1}) with
/// stack forest of total size k.
double stack_forest_prob_by_enumeration(std::int64_t n, std::int64_t r, std::int64_t k, double p);

/// P(G(n,p) in A_{n,r}).
double separated_prob_by_enumeration(std::int64_t n, std::int64_t r, double p);

/// E[size of the component of vertex 0 | G(n,p) acyclic].
double expected_component_of_first_by_enumeration(std::int64_t n, double p);

/// Law of the exploration stack prefix (Z_1..Z_steps) of the acyclicity-
/// conditioned graph, by weighted enumeration; keys are Z prefixes.
std::map<std::vector<std::int32_t>, double> exploration_prefix_law_by_enumeration(
    std::int64_t n, double p, std::int64_t steps);

/// Normalized Brownian excursion on a uniform grid over [0,1], built from
/// three independent Brownian bridges (Bessel-3 bridge identity).
std::vector<double> sample_brownian_excursion(std::size_t grid_points, Rng& rng);

/// Maximum of a sampled normalized Brownian excursion.
double sample_brownian_excursion_max(std::size_t grid_points, Rng& rng);

/// Monte Carlo estimate of the drift correction alpha(b, lambda) with its
/// standard error, by importance sampling the a-integrals with the exact
/// normalized a^{-3/2} e^{-b^2/2a} density (a = b^2 / Z^2, Z standard normal).
struct McEstimate {
    double value;
    double std_error;
};
McEstimate alpha_by_monte_carlo(double b, double lambda, std::int64_t n_samples, Rng& rng);

} // namespace crf::oracle

#endif
