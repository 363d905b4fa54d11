#include "crf/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "crf/errors.hpp"
#include "crf/logspace.hpp"

namespace crf {

namespace {

std::int64_t slot_count(std::int64_t n) { return n * (n - 1) / 2; }

// Decode a linear edge-slot index into the (i,j) pair, i < j, with slots
// ordered row by row: (0,1),(0,2),...,(0,n-1),(1,2),...
Edge decode_slot(std::int64_t n, std::int64_t s) {
    // Row i starts at cum(i) = i*(2n-i-1)/2; invert with a float guess and fix up.
    double nn = static_cast<double>(n);
    double guess = nn - 0.5 - std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * static_cast<double>(s));
    std::int64_t i = static_cast<std::int64_t>(guess);
    if (i < 0) i = 0;
    auto cum = [n](std::int64_t r) { return r * (2 * n - r - 1) / 2; };
    while (i > 0 && cum(i) > s) --i;
    while (cum(i + 1) <= s) ++i;
    std::int64_t j = i + 1 + (s - cum(i));
    return {static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)};
}

// Floyd's uniform m-subset of {0,...,total-1}.
std::vector<std::int64_t> sample_slot_subset(std::int64_t total, std::int64_t m, Rng& rng) {
    std::unordered_set<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(m) * 2);
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t j = total - m; j < total; ++j) {
        std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
        if (chosen.count(r)) {
            chosen.insert(j);
            out.push_back(j);
        } else {
            chosen.insert(r);
            out.push_back(r);
        }
    }
    return out;
}

Forest rejection_forest_nm(std::int64_t n, std::int64_t m, Rng& rng, std::int64_t max_attempts,
                           std::int64_t* attempts_out = nullptr) {
    std::int64_t total = slot_count(n);
    if (m > total) throw DomainError("sample_forest_nm: m exceeds edge slots");
    for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        std::vector<std::int64_t> slots = sample_slot_subset(total, m, rng);
        UnionFind uf(n);
        Forest f;
        f.n_vertices = n;
        f.edges.reserve(static_cast<std::size_t>(m));
        bool ok = true;
        for (std::int64_t s : slots) {
            Edge e = decode_slot(n, s);
            if (!uf.unite(e.first, e.second)) {
                ok = false;
                break;
            }
            f.edges.push_back(e);
        }
        if (ok) {
            if (attempts_out) *attempts_out = attempt;
            return f;
        }
    }
    throw BudgetError("sample_forest_nm: rejection retry budget exceeded", max_attempts);
}

Forest exact_forest_nm(const ForestCountTable& table, std::int64_t n, std::int64_t m, Rng& rng) {
    if (n > table.max_vertices()) throw CapacityError("sample_forest_nm: table too small");
    Forest f;
    f.n_vertices = n;
    f.edges.reserve(static_cast<std::size_t>(m));

    std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    std::int64_t m_rem = m;

    while (!labels.empty()) {
        std::int64_t n_rem = static_cast<std::int64_t>(labels.size());
        // Component of the smallest remaining label: size k has log-weight
        // log C(n_rem-1, k-1) + (k-2) log k + log f(n_rem-k, m_rem-k+1).
        auto term = [&](std::int64_t k) -> double {
            std::int64_t n2 = n_rem - k, m2 = m_rem - k + 1;
            if (m2 < 0) return neg_inf;
            double tail;
            if (n2 == 0) {
                if (m2 != 0) return neg_inf;
                tail = 0.0;
            } else {
                if (m2 > n2 - 1) return neg_inf;
                tail = table.log_count(n2, m2);
            }
            return table.log_factorials().log_binomial(n_rem - 1, k - 1) +
                   static_cast<double>(k - 2) * std::log(static_cast<double>(k)) + tail;
        };
        std::int64_t k_hi = std::min<std::int64_t>(n_rem, m_rem + 1);
        double tmax = neg_inf;
        for (std::int64_t k = 1; k <= k_hi; ++k) tmax = std::max(tmax, term(k));
        double total = 0.0;
        for (std::int64_t k = 1; k <= k_hi; ++k) {
            double t = term(k);
            if (t > tmax - 45.0) total += std::exp(t - tmax);
        }
        double u = rng.u01() * total;
        std::int64_t k_pick = k_hi;
        double acc = 0.0;
        for (std::int64_t k = 1; k <= k_hi; ++k) {
            double t = term(k);
            if (t > tmax - 45.0) acc += std::exp(t - tmax);
            if (acc >= u) {
                k_pick = k;
                break;
            }
        }

        // Choose the k-1 companion labels uniformly among labels[1..].
        std::vector<std::size_t> idx;
        if (k_pick > 1) {
            std::unordered_set<std::size_t> chosen;
            for (std::int64_t j = n_rem - k_pick + 1; j < n_rem; ++j) {
                std::size_t r = static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(j)) + 1); // in [1, j]
                if (chosen.count(r)) {
                    chosen.insert(static_cast<std::size_t>(j));
                } else {
                    chosen.insert(r);
                }
            }
            idx.assign(chosen.begin(), chosen.end());
        }
        idx.push_back(0);
        std::sort(idx.begin(), idx.end());

        std::vector<std::int32_t> comp_labels;
        comp_labels.reserve(idx.size());
        for (std::size_t i : idx) comp_labels.push_back(labels[i]);

        Forest tree = sample_uniform_tree(k_pick, rng);
        for (const Edge& e : tree.edges)
            f.edges.emplace_back(comp_labels[static_cast<std::size_t>(e.first)],
                                 comp_labels[static_cast<std::size_t>(e.second)]);

        // Drop used labels (idx is sorted ascending).
        std::vector<std::int32_t> rest;
        rest.reserve(labels.size() - idx.size());
        std::size_t next = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (next < idx.size() && idx[next] == i) {
                ++next;
            } else {
                rest.push_back(labels[i]);
            }
        }
        labels.swap(rest);
        m_rem -= k_pick - 1;
    }
    return f;
}

} // namespace

Forest sample_uniform_tree(std::int64_t k, Rng& rng) {
    if (k < 1) throw DomainError("sample_uniform_tree: k must be >= 1");
    Forest t;
    t.n_vertices = k;
    if (k == 1) return t;
    if (k == 2) {
        t.edges.push_back({0, 1});
        return t;
    }
    std::vector<std::int32_t> seq(static_cast<std::size_t>(k - 2));
    for (auto& s : seq) s = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(k)));
    std::vector<std::int32_t> degree(static_cast<std::size_t>(k), 1);
    for (std::int32_t s : seq) degree[static_cast<std::size_t>(s)]++;

    std::int32_t ptr = 0;
    while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
    std::int32_t leaf = ptr;
    for (std::int32_t s : seq) {
        t.edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
        if (--degree[static_cast<std::size_t>(s)] == 1 && s < ptr) {
            leaf = s;
        } else {
            ++ptr;
            while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
            leaf = ptr;
        }
    }
    t.edges.emplace_back(leaf, static_cast<std::int32_t>(k - 1));
    return t;
}

Graph sample_gnp(std::int64_t n, double p, Rng& rng) {
    if (n < 0 || p < 0.0 || p > 1.0) throw DomainError("sample_gnp: bad arguments");
    Graph g;
    g.n_vertices = n;
    std::int64_t total = slot_count(n);
    if (p == 0.0 || total == 0) return g;
    if (p == 1.0) {
        for (std::int32_t i = 0; i < n; ++i)
            for (std::int32_t j = i + 1; j < n; ++j) g.edges.push_back({i, j});
        return g;
    }
    std::int64_t pos = -1;
    while (true) {
        pos += static_cast<std::int64_t>(rng.geometric_skip(p)) + 1;
        if (pos >= total) break;
        g.edges.push_back(decode_slot(n, pos));
    }
    return g;
}

Graph sample_gnm(std::int64_t n, std::int64_t m, Rng& rng) {
    std::int64_t total = slot_count(n);
    if (m < 0 || m > total) throw DomainError("sample_gnm: m out of range");
    Graph g;
    g.n_vertices = n;
    for (std::int64_t s : sample_slot_subset(total, m, rng)) g.edges.push_back(decode_slot(n, s));
    return g;
}

std::vector<Graph> sample_gnp_nested(std::int64_t n, const std::vector<double>& probs, Rng& rng) {
    for (double p : probs)
        if (p < 0.0 || p > 1.0) throw DomainError("sample_gnp_nested: bad probability");
    std::vector<Graph> out(probs.size());
    for (auto& g : out) g.n_vertices = n;
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = i + 1; j < n; ++j) {
            double u = rng.u01();
            for (std::size_t t = 0; t < probs.size(); ++t)
                if (u < probs[t]) out[t].edges.push_back({i, j});
        }
    }
    return out;
}

Forest sample_forest_nm(const ForestCountTable* table, std::int64_t n, std::int64_t m, Rng& rng,
                        ForestStrategy strategy, std::int64_t max_attempts) {
    if (n < 1 || m < 0 || m > n - 1) throw DomainError("sample_forest_nm: need 0 <= m <= n-1");
    bool use_exact;
    switch (strategy) {
        case ForestStrategy::Exact: use_exact = true; break;
        case ForestStrategy::Rejection: use_exact = false; break;
        default: use_exact = table != nullptr && n <= table->max_vertices(); break;
    }
    if (use_exact) {
        if (!table) throw CapacityError("sample_forest_nm: exact strategy needs a table");
        return exact_forest_nm(*table, n, m, rng);
    }
    return rejection_forest_nm(n, m, rng, max_attempts);
}

Forest sample_forest_np(const ForestCountTable* table, std::int64_t n, double p, Rng& rng,
                        ForestStrategy strategy, std::int64_t max_attempts) {
    if (n < 1 || !(p > 0.0) || p >= 1.0) throw DomainError("sample_forest_np: need 0 < p < 1");
    bool use_exact;
    switch (strategy) {
        case ForestStrategy::Exact: use_exact = true; break;
        case ForestStrategy::Rejection: use_exact = false; break;
        default: use_exact = table != nullptr && n <= table->max_vertices(); break;
    }
    if (use_exact) {
        if (!table || n > table->max_vertices())
            throw CapacityError("sample_forest_np: exact strategy needs table coverage");
        // Edge-count mixture: P(M = m) ~ f(n,m) (p/(1-p))^m.
        double logw = std::log(p) - std::log1p(-p);
        double tmax = neg_inf;
        for (std::int64_t m = 0; m <= n - 1; ++m)
            tmax = std::max(tmax, table->log_count(n, m) + static_cast<double>(m) * logw);
        double total = 0.0;
        for (std::int64_t m = 0; m <= n - 1; ++m) {
            double t = table->log_count(n, m) + static_cast<double>(m) * logw;
            if (t > tmax - 45.0) total += std::exp(t - tmax);
        }
        double u = rng.u01() * total;
        std::int64_t m_pick = n - 1;
        double acc = 0.0;
        for (std::int64_t m = 0; m <= n - 1; ++m) {
            double t = table->log_count(n, m) + static_cast<double>(m) * logw;
            if (t > tmax - 45.0) acc += std::exp(t - tmax);
            if (acc >= u) {
                m_pick = m;
                break;
            }
        }
        return exact_forest_nm(*table, n, m_pick, rng);
    }
    return sample_forest_np_embedded(n, p, rng, max_attempts).forest;
}

EmbeddedForest sample_forest_np_embedded(std::int64_t n, double p, Rng& rng,
                                         std::int64_t max_attempts) {
    if (n < 1 || !(p > 0.0) || p >= 1.0)
        throw DomainError("sample_forest_np_embedded: need 0 < p < 1");
    for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        Graph g = sample_gnp(n, p, rng);
        UnionFind uf(n);
        bool acyclic = true;
        for (const Edge& e : g.edges) {
            if (!uf.unite(e.first, e.second)) {
                acyclic = false;
                break;
            }
        }
        if (acyclic) {
            EmbeddedForest out;
            out.forest.n_vertices = n;
            out.forest.edges = g.edges;
            out.ambient = std::move(g);
            out.attempts = attempt;
            return out;
        }
    }
    throw BudgetError("sample_forest_np_embedded: rejection retry budget exceeded", max_attempts);
}

double sequential_cycle_bound(double s2, std::int64_t k, std::int64_t n) {
    if (k < 0 || n < 1 || s2 < 0.0) throw DomainError("sequential_cycle_bound: bad arguments");
    if (k == 0) return 0.0;
    double x = 2.0 * static_cast<double>(k) * s2 / (static_cast<double>(n) * static_cast<double>(n));
    if (x >= 1.0) throw DomainError("sequential_cycle_bound: 2kS^2/n^2 >= 1, bound undefined");
    return x / (1.0 - x);
}

CoupledTriple almost_monotone_triple(std::int64_t n, std::int64_t m, Rng& rng,
                                     std::int64_t max_attempts) {
    if (n < 2 || m < 1 || m > n - 1) throw DomainError("almost_monotone_triple: bad (n,m)");
    double margin = std::ceil(std::pow(static_cast<double>(n), 0.6));
    double mm = static_cast<double>(m);
    double n2 = static_cast<double>(n) * static_cast<double>(n);
    // At small n the canonical margin can swallow m entirely; clamp so both
    // tilted probabilities stay valid. Marginal exactness never depends on
    // the margin, only the chance that the monotone path succeeds does.
    margin = std::min(margin, mm - 0.5);
    margin = std::min(margin, n2 / 2.0 * (1.0 - 1e-9) - mm);
    if (margin <= 0.0)
        throw DomainError("almost_monotone_triple: no admissible margin for this (n,m)");
    double p_minus = 2.0 * (mm - margin) / n2;
    double p_plus = 2.0 * (mm + margin) / n2;

    CoupledTriple out;
    // Edge-count draws: the edge count of F(n,p) is read off a rejection
    // sample, whose conditional law given its edge count M is exactly F(n,M).
    Forest lower = sample_forest_np_embedded(n, p_minus, rng, max_attempts).forest;
    Forest plus_draw = sample_forest_np_embedded(n, p_plus, rng, max_attempts).forest;
    std::int64_t m_minus = static_cast<std::int64_t>(lower.edges.size());
    std::int64_t m_plus = static_cast<std::int64_t>(plus_draw.edges.size());
    out.lower = lower;

    if (!(m_minus < m && m < m_plus)) {
        out.middle = rejection_forest_nm(n, m, rng, max_attempts);
        out.upper = std::move(plus_draw);
        out.monotone = false;
        return out;
    }

    // Sequential uniform additions from the lower forest. Draws are uniform
    // on [n] x [n]; a self-edge or any same-component pair is a cycle event.
    std::int64_t K = m_plus - m_minus;
    UnionFind uf(n);
    for (const Edge& e : lower.edges) uf.unite(e.first, e.second);
    std::vector<Edge> added;
    added.reserve(static_cast<std::size_t>(K));
    std::int64_t cycle_at = K + 1;
    for (std::int64_t j = 1; j <= K; ++j) {
        std::int32_t u = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(n)));
        std::int32_t v = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v || !uf.unite(u, v)) {
            cycle_at = j;
            break;
        }
        added.emplace_back(std::min(u, v), std::max(u, v));
    }

    std::int64_t steps_to_mid = m - m_minus;
    if (steps_to_mid < cycle_at) {
        out.middle = lower;
        out.middle.edges.insert(out.middle.edges.end(), added.begin(),
                                added.begin() + steps_to_mid);
    } else {
        out.middle = rejection_forest_nm(n, m, rng, max_attempts);
    }
    if (cycle_at > K) {
        out.upper = lower;
        out.upper.edges.insert(out.upper.edges.end(), added.begin(), added.end());
        out.monotone = true;
    } else {
        out.upper = std::move(plus_draw);
        out.monotone = false;
    }
    return out;
}

} // namespace crf
