#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crf/analysis.hpp"
#include "crf/errors.hpp"
#include "crf/samplers.hpp"
#include "verify/oracles.hpp"

using namespace crf;

namespace {

// Index of a forest within a reference list, by canonical edge key.
std::map<std::vector<std::int64_t>, std::size_t> index_forests(const std::vector<Forest>& all) {
    std::map<std::vector<std::int64_t>, std::size_t> idx;
    for (std::size_t i = 0; i < all.size(); ++i) idx[canonical_edge_key(all[i])] = i;
    return idx;
}

} // namespace

TEST_CASE("uniform tree: basics") {
    Rng rng(41);
    CHECK_THROWS_AS(sample_uniform_tree(0, rng), DomainError);
    Forest t2 = sample_uniform_tree(2, rng);
    REQUIRE(t2.edges.size() == 1);
    CHECK(t2.edges[0] == Edge{0, 1});
    for (std::int64_t k : {1, 3, 9, 40}) {
        Forest t = sample_uniform_tree(k, rng);
        CHECK(static_cast<std::int64_t>(t.edges.size()) == k - 1);
        CHECK(is_forest(t));
        CHECK(component_sizes(t).size() == 1);
    }
}

TEST_CASE("uniform tree: chi-square uniformity over the 16 labelled trees on 4 vertices") {
    Rng rng(42);
    std::vector<Forest> trees = oracle::all_forests(4, 3);
    REQUIRE(trees.size() == 16);
    auto idx = index_forests(trees);
    std::vector<std::int64_t> counts(16, 0);
    for (int i = 0; i < 16000; ++i) {
        Forest t = sample_uniform_tree(4, rng);
        counts[idx.at(canonical_edge_key(t))]++;
    }
    CHECK(chisq_uniform_pvalue(counts) > 0.01);
}

TEST_CASE("gnp: degenerate probabilities and mean edge count") {
    Rng rng(43);
    CHECK(sample_gnp(30, 0.0, rng).edges.empty());
    CHECK(sample_gnp(5, 1.0, rng).edges.size() == 10);
    // Binomial mean over 1000 draws at n=100, p=0.02.
    double total = 0.0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i)
        total += static_cast<double>(sample_gnp(100, 0.02, rng).edges.size());
    double mean = total / reps;
    double expected = 4950.0 * 0.02;
    double se = std::sqrt(4950.0 * 0.02 * 0.98 / reps);
    CHECK(std::fabs(mean - expected) < 3.0 * se);
}

TEST_CASE("gnp nested coupling is monotone in p") {
    Rng rng(44);
    for (int rep = 0; rep < 20; ++rep) {
        auto graphs = sample_gnp_nested(40, {0.01, 0.05, 0.2}, rng);
        std::set<Edge> lo(graphs[0].edges.begin(), graphs[0].edges.end());
        std::set<Edge> mid(graphs[1].edges.begin(), graphs[1].edges.end());
        std::set<Edge> hi(graphs[2].edges.begin(), graphs[2].edges.end());
        CHECK(std::includes(mid.begin(), mid.end(), lo.begin(), lo.end()));
        CHECK(std::includes(hi.begin(), hi.end(), mid.begin(), mid.end()));
    }
}

TEST_CASE("gnm: edge count and bounds") {
    Rng rng(45);
    CHECK_THROWS_AS(sample_gnm(5, 11, rng), DomainError);
    Graph g = sample_gnm(30, 100, rng);
    CHECK(g.edges.size() == 100);
    std::set<Edge> distinct(g.edges.begin(), g.edges.end());
    CHECK(distinct.size() == 100);
}

TEST_CASE("forest samplers: trivial cases and the validator") {
    Rng rng(46);
    ForestCountTable table = ForestCountTable::build(64);
    Forest empty = sample_forest_nm(&table, 17, 0, rng);
    CHECK(empty.edges.empty());
    for (int rep = 0; rep < 100; ++rep) {
        std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(60));
        std::int64_t m = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
        // Rejection is exponentially slow near m = n-1; exercise it only on
        // the sparse half.
        bool rejection = rep % 2 == 0 && m <= n / 2;
        Forest f = sample_forest_nm(&table, n, m, rng,
                                    rejection ? ForestStrategy::Rejection : ForestStrategy::Exact);
        CAPTURE(n);
        CAPTURE(m);
        CHECK(static_cast<std::int64_t>(f.edges.size()) == m);
        CHECK(is_forest(f));
    }
}

TEST_CASE("forest at m = n-1 is a uniform spanning tree") {
    Rng rng(47);
    ForestCountTable table = ForestCountTable::build(8);
    std::vector<Forest> trees = oracle::all_forests(4, 3);
    auto idx = index_forests(trees);
    std::vector<std::int64_t> via_nm(16, 0), via_tree(16, 0);
    for (int i = 0; i < 16000; ++i) {
        via_nm[idx.at(canonical_edge_key(sample_forest_nm(&table, 4, 3, rng)))]++;
        via_tree[idx.at(canonical_edge_key(sample_uniform_tree(4, rng)))]++;
    }
    CHECK(chisq_two_sample_pvalue(via_nm, via_tree) > 0.01);
}

TEST_CASE("forest sampler uniformity at (n=5, m=3), both strategies") {
    Rng rng(48);
    ForestCountTable table = ForestCountTable::build(5);
    std::vector<Forest> forests = oracle::all_forests(5, 3);
    REQUIRE(forests.size() == 110);
    auto idx = index_forests(forests);
    const std::int64_t samples = 50 * 110;
    std::vector<std::int64_t> exact_counts(110, 0), rej_counts(110, 0);
    for (std::int64_t i = 0; i < samples; ++i) {
        exact_counts[idx.at(
            canonical_edge_key(sample_forest_nm(&table, 5, 3, rng, ForestStrategy::Exact)))]++;
        rej_counts[idx.at(
            canonical_edge_key(sample_forest_nm(&table, 5, 3, rng, ForestStrategy::Rejection)))]++;
    }
    CHECK(chisq_uniform_pvalue(exact_counts) > 0.01);
    CHECK(chisq_uniform_pvalue(rej_counts) > 0.01);
    CHECK(chisq_two_sample_pvalue(exact_counts, rej_counts) > 0.01);
}

TEST_CASE("conditioned forest at n = 3, p = 0.5: exact point masses") {
    Rng rng(49);
    ForestCountTable table = ForestCountTable::build(3);
    // At p = 1/2 every forest carries equal weight, so each of the 7 forests
    // on 3 vertices has probability 1/7; in particular the empty forest gets
    // 0.125/0.875 and each 2-edge path a third of 3/7.
    std::vector<Forest> cats;
    for (std::int64_t m = 0; m <= 2; ++m)
        for (const Forest& f : oracle::all_forests(3, m)) cats.push_back(f);
    REQUIRE(cats.size() == 7);
    auto idx = index_forests(cats);
    std::vector<double> probs(7, 1.0 / 7.0);
    for (auto strategy : {ForestStrategy::Exact, ForestStrategy::Rejection}) {
        std::vector<std::int64_t> counts(7, 0);
        for (int i = 0; i < 14000; ++i)
            counts[idx.at(canonical_edge_key(sample_forest_np(&table, 3, 0.5, rng, strategy)))]++;
        CHECK(chisq_pvalue(counts, probs) > 0.01);
    }
}

TEST_CASE("edge count of the conditioned forest concentrates in the window") {
    Rng rng(50);
    const std::int64_t n = 2000;
    const double p = 1.0 / static_cast<double>(n);
    const double center = static_cast<double>(n) * static_cast<double>(n) * p / 2.0;
    const double gate = std::pow(static_cast<double>(n), 0.6);
    int inside = 0;
    const int reps = 300;
    double attempts_total = 0.0;
    for (int i = 0; i < reps; ++i) {
        EmbeddedForest ef = sample_forest_np_embedded(n, p, rng);
        attempts_total += static_cast<double>(ef.attempts);
        if (std::fabs(static_cast<double>(ef.forest.edges.size()) - center) <= gate) ++inside;
    }
    CHECK(static_cast<double>(inside) / reps >= 0.99);
    // Acceptance rate vs the window asymptotic for the acyclic probability.
    double rate = static_cast<double>(reps) / attempts_total;
    double asym = acyclic_probability_asymptotic(n, p);
    CHECK(std::fabs(rate / asym - 1.0) < 0.25);
}

TEST_CASE("rejection embedding realises edge containment") {
    Rng rng(51);
    for (int i = 0; i < 50; ++i) {
        EmbeddedForest ef = sample_forest_np_embedded(400, 1.0 / 400.0, rng);
        CHECK(is_forest(ef.forest));
        std::set<Edge> amb(ef.ambient.edges.begin(), ef.ambient.edges.end());
        bool contained = true;
        for (const Edge& e : ef.forest.edges) contained = contained && amb.count(e) > 0;
        CHECK(contained);
        // Each ambient component is a union of forest components, so the
        // ambient size vector weakly majorises the forest's.
        std::vector<double> gs, fs;
        for (std::int64_t s : component_sizes(ef.ambient)) gs.push_back(static_cast<double>(s));
        for (std::int64_t s : component_sizes(ef.forest)) fs.push_back(static_cast<double>(s));
        CHECK(weak_majorises(gs, fs));
    }
}

TEST_CASE("subcritical mean component size is bounded by the branching mean") {
    // At np = 0.9 the exploration is dominated by a subcritical branching
    // process with mean offspring np, whose total progeny has mean
    // 1/(1 - np) = 10; allow 10% slack for the Monte Carlo average.
    Rng rng(55);
    const std::int64_t n = 10000;
    const double p = 0.9 / static_cast<double>(n);
    double total = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        Graph g = sample_gnp(n, p, rng);
        // E[size of the component of a uniform vertex] = sum s_i^2 / n.
        total += component_square_sum(g) / static_cast<double>(n);
    }
    double mean = total / reps;
    CHECK(mean <= 1.1 / (1.0 - 0.9));
    CHECK(mean > 1.0);
}

TEST_CASE("sequential cycle bound: formula properties") {
    CHECK(sequential_cycle_bound(1000.0, 0, 100) == 0.0);
    CHECK_THROWS_AS(sequential_cycle_bound(6000.0, 1, 100), DomainError);
    double prev = 0.0;
    for (std::int64_t k : {1, 2, 5, 10}) {
        double v = sequential_cycle_bound(50.0, k, 100);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(sequential_cycle_bound(80.0, 3, 100) > sequential_cycle_bound(50.0, 3, 100));
}

TEST_CASE("sequential cycle bound dominates the empirical cycle frequency") {
    Rng rng(52);
    const std::int64_t n = 1000;
    const std::int64_t k = 10;
    int cycles = 0;
    double bound_sum = 0.0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        Forest f = sample_forest_nm(nullptr, n, 500, rng, ForestStrategy::Rejection);
        double s2 = component_square_sum(f);
        double x = 2.0 * static_cast<double>(k) * s2 / (1e6);
        bound_sum += x < 1.0 ? std::min(1.0, sequential_cycle_bound(s2, k, n)) : 1.0;
        UnionFind uf(n);
        for (const Edge& e : f.edges) uf.unite(e.first, e.second);
        bool cycle = false;
        for (int j = 0; j < k; ++j) {
            auto u = static_cast<std::int32_t>(rng.below(n));
            auto v = static_cast<std::int32_t>(rng.below(n));
            if (u == v || !uf.unite(u, v)) {
                cycle = true;
                break;
            }
        }
        if (cycle) ++cycles;
    }
    CHECK(static_cast<double>(cycles) / trials <= bound_sum / trials);
}

TEST_CASE("almost monotone triple: containment when flagged and exact middle marginal") {
    Rng rng(53);
    // Containment check at a size where the monotone branch fires often.
    int monotone_seen = 0;
    for (int t = 0; t < 40; ++t) {
        CoupledTriple tri = almost_monotone_triple(400, 200, rng);
        CHECK(is_forest(tri.lower));
        CHECK(is_forest(tri.middle));
        CHECK(is_forest(tri.upper));
        if (tri.monotone) {
            ++monotone_seen;
            std::set<Edge> lo(tri.lower.edges.begin(), tri.lower.edges.end());
            std::set<Edge> mid(tri.middle.edges.begin(), tri.middle.edges.end());
            std::set<Edge> hi(tri.upper.edges.begin(), tri.upper.edges.end());
            CHECK(std::includes(mid.begin(), mid.end(), lo.begin(), lo.end()));
            CHECK(std::includes(hi.begin(), hi.end(), mid.begin(), mid.end()));
        }
    }
    CHECK(monotone_seen > 0);

    // Middle marginal at (n=5, m=2) against the uniform law on the 45
    // two-edge forests, across both branches of the construction.
    std::vector<Forest> forests = oracle::all_forests(5, 2);
    REQUIRE(forests.size() == 45);
    auto idx = index_forests(forests);
    std::vector<std::int64_t> counts(45, 0);
    for (int t = 0; t < 20000; ++t) {
        CoupledTriple tri = almost_monotone_triple(5, 2, rng);
        counts[idx.at(canonical_edge_key(tri.middle))]++;
    }
    CHECK(chisq_uniform_pvalue(counts) > 0.01);
}

TEST_CASE("replica streams are reproducible and order-independent") {
    Rng a = Rng::child(123, 7);
    Rng b = Rng::child(123, 7);
    Forest fa = sample_forest_nm(nullptr, 50, 20, a, ForestStrategy::Rejection);
    Forest fb = sample_forest_nm(nullptr, 50, 20, b, ForestStrategy::Rejection);
    CHECK(canonical_edge_key(fa) == canonical_edge_key(fb));
    Rng c = Rng::child(123, 8);
    Forest fc = sample_forest_nm(nullptr, 50, 20, c, ForestStrategy::Rejection);
    CHECK(canonical_edge_key(fa) != canonical_edge_key(fc));
}
