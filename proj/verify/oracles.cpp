#include "verify/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "crf/errors.hpp"
#include "crf/exploration.hpp"
#include "crf/stable_density.hpp"

namespace crf::oracle {

namespace {

std::vector<Edge> slot_list(std::int64_t n) {
    std::vector<Edge> slots;
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = i + 1; j < n; ++j) slots.push_back({i, j});
    return slots;
}

double graph_weight(std::size_t edges, std::size_t slots, double p) {
    return std::pow(p, static_cast<double>(edges)) *
           std::pow(1.0 - p, static_cast<double>(slots - edges));
}

} // namespace

std::vector<Graph> all_graphs(std::int64_t n) {
    if (n < 0 || n > 6) throw DomainError("all_graphs: enumeration limited to n <= 6");
    std::vector<Edge> slots = slot_list(n);
    std::vector<Graph> out;
    out.reserve(1u << slots.size());
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        Graph g;
        g.n_vertices = n;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask & (1u << s)) g.edges.push_back(slots[s]);
        out.push_back(std::move(g));
    }
    return out;
}

std::int64_t forest_count_by_enumeration(std::int64_t n, std::int64_t m) {
    std::int64_t count = 0;
    for (const Graph& g : all_graphs(n))
        if (static_cast<std::int64_t>(g.edges.size()) == m && is_forest(g)) ++count;
    return count;
}

std::vector<Forest> all_forests(std::int64_t n, std::int64_t m) {
    std::vector<Forest> out;
    for (const Graph& g : all_graphs(n)) {
        if (static_cast<std::int64_t>(g.edges.size()) == m && is_forest(g)) {
            Forest f;
            f.n_vertices = n;
            f.edges = g.edges;
            out.push_back(std::move(f));
        }
    }
    return out;
}

double acyclic_prob_by_enumeration(std::int64_t n, double p) {
    std::size_t slots = static_cast<std::size_t>(n * (n - 1) / 2);
    double total = 0.0;
    for (const Graph& g : all_graphs(n))
        if (is_forest(g)) total += graph_weight(g.edges.size(), slots, p);
    return total;
}

namespace {

// Stack-forest size of [r] in a forest: sum of the component sizes of
// vertices 0..r-1, provided those are pairwise separated (else -1).
std::int64_t stack_forest_size(const Graph& g, std::int64_t r) {
    UnionFind uf(g.n_vertices);
    for (const Edge& e : g.edges) uf.unite(e.first, e.second);
    std::int64_t total = 0;
    for (std::int32_t i = 0; i < r; ++i) {
        for (std::int32_t j = static_cast<std::int32_t>(i + 1); j < r; ++j)
            if (uf.find(i) == uf.find(j)) return -1;
        total += uf.component_size(i);
    }
    return total;
}

} // namespace

double stack_forest_prob_by_enumeration(std::int64_t n, std::int64_t r, std::int64_t k, double p) {
    std::size_t slots = static_cast<std::size_t>(n * (n - 1) / 2);
    double total = 0.0;
    for (const Graph& g : all_graphs(n)) {
        if (!is_forest(g)) continue;
        if (stack_forest_size(g, r) == k) total += graph_weight(g.edges.size(), slots, p);
    }
    return total;
}

double separated_prob_by_enumeration(std::int64_t n, std::int64_t r, double p) {
    std::size_t slots = static_cast<std::size_t>(n * (n - 1) / 2);
    double total = 0.0;
    for (const Graph& g : all_graphs(n)) {
        if (!is_forest(g)) continue;
        if (stack_forest_size(g, r) >= 0) total += graph_weight(g.edges.size(), slots, p);
    }
    return total;
}

double expected_component_of_first_by_enumeration(std::int64_t n, double p) {
    std::size_t slots = static_cast<std::size_t>(n * (n - 1) / 2);
    double num = 0.0, den = 0.0;
    for (const Graph& g : all_graphs(n)) {
        if (!is_forest(g)) continue;
        double w = graph_weight(g.edges.size(), slots, p);
        UnionFind uf(g.n_vertices);
        for (const Edge& e : g.edges) uf.unite(e.first, e.second);
        num += w * static_cast<double>(uf.component_size(0));
        den += w;
    }
    return num / den;
}

std::map<std::vector<std::int32_t>, double> exploration_prefix_law_by_enumeration(
    std::int64_t n, double p, std::int64_t steps) {
    std::size_t slots = static_cast<std::size_t>(n * (n - 1) / 2);
    std::map<std::vector<std::int32_t>, double> law;
    double total = 0.0;
    for (const Graph& g : all_graphs(n)) {
        if (!is_forest(g)) continue;
        double w = graph_weight(g.edges.size(), slots, p);
        ExplorationTrace tr = explore(g);
        std::vector<std::int32_t> prefix(tr.stack_sizes.begin() + 1,
                                         tr.stack_sizes.begin() + 1 + steps);
        law[prefix] += w;
        total += w;
    }
    for (auto& kv : law) kv.second /= total;
    return law;
}

std::vector<double> sample_brownian_excursion(std::size_t grid_points, Rng& rng) {
    // Three Brownian bridges B_i(t) = W_i(t) - t W_i(1) on the grid; the
    // excursion is their Euclidean norm.
    std::size_t m = grid_points;
    std::vector<double> w1(m + 1, 0.0), w2(m + 1, 0.0), w3(m + 1, 0.0);
    double sq = std::sqrt(1.0 / static_cast<double>(m));
    for (std::size_t i = 1; i <= m; ++i) {
        w1[i] = w1[i - 1] + sq * rng.normal();
        w2[i] = w2[i - 1] + sq * rng.normal();
        w3[i] = w3[i - 1] + sq * rng.normal();
    }
    std::vector<double> ex(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(m);
        double b1 = w1[i] - t * w1[m];
        double b2 = w2[i] - t * w2[m];
        double b3 = w3[i] - t * w3[m];
        ex[i] = std::sqrt(b1 * b1 + b2 * b2 + b3 * b3);
    }
    return ex;
}

double sample_brownian_excursion_max(std::size_t grid_points, Rng& rng) {
    std::vector<double> ex = sample_brownian_excursion(grid_points, rng);
    return *std::max_element(ex.begin(), ex.end());
}

McEstimate alpha_by_monte_carlo(double b, double lambda, std::int64_t n_samples, Rng& rng) {
    // a^{-3/2} e^{-b^2/2a} da is b / sqrt(2 pi) times the density of b^2/Z^2;
    // under that proposal alpha = E[a h(a)] / E[h(a)] with h(a) = g(lambda-a).
    // Delta-method standard error.
    QuadratureConfig gcfg;
    gcfg.abs_tol = 1e-9;
    double sum_h = 0.0, sum_ah = 0.0, sum_hh = 0.0, sum_aa = 0.0, sum_ah_h = 0.0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        double z = rng.normal();
        if (z == 0.0) continue;
        double a = b * b / (z * z);
        double h = a - lambda < 25.0 ? eval_g(lambda - a, gcfg) : 0.0;
        double ah = a * h;
        sum_h += h;
        sum_ah += ah;
        sum_hh += h * h;
        sum_aa += ah * ah;
        sum_ah_h += ah * h;
    }
    double nn = static_cast<double>(n_samples);
    double mh = sum_h / nn, mah = sum_ah / nn;
    double vh = sum_hh / nn - mh * mh;
    double vah = sum_aa / nn - mah * mah;
    double cov = sum_ah_h / nn - mah * mh;
    double ratio = mah / mh;
    double var_ratio =
        (vah - 2.0 * ratio * cov + ratio * ratio * vh) / (mh * mh) / nn;
    return {ratio, std::sqrt(std::max(var_ratio, 0.0))};
}

} // namespace crf::oracle
