#include "verify/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

#include "crf/analysis.hpp"
#include "crf/diffusion.hpp"
#include "crf/drift.hpp"
#include "crf/errors.hpp"
#include "crf/exploration.hpp"
#include "crf/forest_counts.hpp"
#include "crf/graph.hpp"
#include "crf/io.hpp"
#include "crf/parallel.hpp"
#include "crf/samplers.hpp"
#include "verify/oracles.hpp"

namespace crf::verify {

namespace {

// Collects named sub-checks; the criterion passes iff all of them hold.
class Checks {
public:
    void require(const std::string& label, bool ok, const std::string& info = "") {
        if (!ok) {
            all_ok_ = false;
            if (!failures_.empty()) failures_ += "; ";
            failures_ += label;
            if (!info.empty()) failures_ += " [" + info + "]";
        }
        ++total_;
        if (ok) ++passed_;
    }
    bool ok() const { return all_ok_; }
    std::string summary(const std::string& extra = "") const {
        std::ostringstream os;
        os << passed_ << "/" << total_ << " checks";
        if (!extra.empty()) os << "; " << extra;
        if (!all_ok_) os << "; failed: " << failures_;
        return os.str();
    }

private:
    bool all_ok_ = true;
    int total_ = 0, passed_ = 0;
    std::string failures_;
};

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// The production drift table, cached on disk under opts.cache_dir so that the
// large criteria share one build.
const AlphaTable& shared_alpha_table(const VerifyOptions& opts) {
    static std::mutex mu;
    static std::unique_ptr<AlphaTable> table;
    std::lock_guard<std::mutex> lock(mu);
    if (table) return *table;
    std::filesystem::path cache =
        std::filesystem::path(opts.cache_dir) / "critforest_alpha_default.bin";
    if (std::filesystem::exists(cache)) {
        try {
            table = std::make_unique<AlphaTable>(AlphaTable::load(cache.string()));
            return *table;
        } catch (const std::exception&) {
            // fall through to a rebuild
        }
    }
    table = std::make_unique<AlphaTable>(
        AlphaTable::build(AlphaTable::GridSpec{}, DriftEvalConfig{}, opts.threads));
    try {
        table->save(cache.string());
    } catch (const std::exception&) {
        // cache directory may be read-only; not fatal
    }
    return *table;
}

// ---- 1: exact forest counts against exhaustive enumeration ----------------

void criterion_counts(Checks& c, const VerifyOptions&) {
    ForestCountTable table = ForestCountTable::build(6);
    for (std::int64_t n = 1; n <= 6; ++n) {
        for (std::int64_t m = 0; m <= n - 1; ++m) {
            std::int64_t brute = oracle::forest_count_by_enumeration(n, m);
            std::int64_t val =
                static_cast<std::int64_t>(std::llround(std::exp(table.log_count(n, m))));
            c.require("f(" + std::to_string(n) + "," + std::to_string(m) + ")", val == brute,
                      fmt(static_cast<double>(val)) + " vs " + fmt(static_cast<double>(brute)));
        }
    }
}

// ---- 2: tree counts ---------------------------------------------------------

void criterion_cayley(Checks& c, const VerifyOptions&) {
    ForestCountTable table = ForestCountTable::build(12);
    for (std::int64_t n = 2; n <= 12; ++n) {
        double expected = static_cast<double>(n - 2) * std::log(static_cast<double>(n));
        double got = table.log_count(n, n - 1);
        double rel = expected == 0.0 ? std::fabs(got) : std::fabs(got / expected - 1.0);
        c.require("trees on " + std::to_string(n), rel < 1e-10, fmt(got) + " vs " + fmt(expected));
    }
}

// ---- 3: event formulas against enumeration --------------------------------

void criterion_formulas(Checks& c, const VerifyOptions&) {
    for (std::int64_t n : {5, 6}) {
        ForestCountTable table = ForestCountTable::build(n);
        for (double p : {0.1, 0.3, 0.5}) {
            double brute = oracle::acyclic_prob_by_enumeration(n, p);
            double exact = acyclic_probability(table, n, p);
            c.require("acyclic n=" + std::to_string(n) + " p=" + fmt(p),
                      std::fabs(exact - brute) < 1e-12);
            for (std::int64_t r = 1; r <= n; ++r) {
                for (std::int64_t k = r; k <= n; ++k) {
                    double b2 = oracle::stack_forest_prob_by_enumeration(n, r, k, p);
                    double e2 = stack_forest_prob(table, n, r, k, p);
                    c.require("stack n=" + std::to_string(n) + " r=" + std::to_string(r) +
                                  " k=" + std::to_string(k) + " p=" + fmt(p),
                              std::fabs(e2 - b2) < 1e-12);
                }
            }
        }
    }
}

// ---- 4: the stable density is a density ------------------------------------

void criterion_density(Checks& c, const VerifyOptions&) {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-9;
    // Mass: the right tail is ~ x^{-5/2}/sqrt(2 pi), so beyond 1500 less than
    // 1e-5 is left; the left tail decays like exp(-|x|^3/6).
    double mass = integrate_g(-25.0, 1500.0, cfg);
    c.require("normalization", std::fabs(mass - 1.0) < 1e-4, "mass " + fmt(mass));
    // Positivity where double precision resolves the value.
    bool positive = true;
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.5) positive = positive && eval_g(x) > 0.0;
    c.require("positivity on [-10, 10]", positive);
    // Decay gates on both sides.
    c.require("left decay", std::fabs(eval_g(-20.0)) < 1e-12 && std::fabs(eval_g(-50.0)) < 1e-12);
    c.require("right decay", eval_g(50.0) < 1e-4 && eval_g(320.0) < 1e-6);
    // Uniform-continuity proxy and tolerance self-consistency.
    bool lipschitz = true;
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.5)
        lipschitz = lipschitz && std::fabs(eval_g(x + 1e-3) - eval_g(x)) <= 0.5e-3;
    c.require("uniform continuity proxy", lipschitz);
    QuadratureConfig loose;
    loose.abs_tol = 1e-8;
    loose.truncation_tail = 1e-10;
    QuadratureConfig tight;
    tight.abs_tol = 5e-9;
    tight.truncation_tail = 5e-11;
    bool consistent = true;
    for (double x : {-4.0, 0.0, 3.0})
        consistent = consistent && std::fabs(eval_g(x, loose) - eval_g(x, tight)) < loose.abs_tol;
    c.require("tolerance self-consistency", consistent);
}

// ---- 5: window asymptotics sharpen with n ----------------------------------

void criterion_asymptotics(Checks& c, const VerifyOptions& opts) {
    ForestCountTable table = ForestCountTable::build(3200, opts.threads);
    double prev = 1e18;
    double final_gap = 1.0;
    for (std::int64_t n : {200, 800, 3200}) {
        std::int64_t m = (n + 1) / 2;
        double ratio = std::exp(table.log_count(n, m) - britikov_log_count(n, m).log_value);
        double gap = std::fabs(ratio - 1.0);
        c.require("count ratio shrinks at n=" + std::to_string(n), gap < prev,
                  "gap " + fmt(gap));
        prev = gap;
        final_gap = gap;
    }
    c.require("count ratio within 5% at n=3200", final_gap <= 0.05, "gap " + fmt(final_gap));

    double p0 = 1.0 / 2000.0; // Lambda = 0
    double exact = acyclic_probability(table, 2000, p0);
    double asym = acyclic_probability_asymptotic(2000, p0);
    double gap = std::fabs(asym / exact - 1.0);
    c.require("acyclic asymptotic within 10% at n=2000", gap <= 0.10, "gap " + fmt(gap));
}

// ---- 6: drift-correction calculus ------------------------------------------

void criterion_alpha(Checks& c, const VerifyOptions&) {
    const StableDensityTable* gt = make_drift_gtable().get();
    for (double lambda : {-2.0, 0.0, 2.0}) {
        bool increasing = true;
        double prevv = -1.0;
        for (double b = 0.1; b <= 5.0 + 1e-12; b += 0.1) {
            double v = eval_alpha(b, lambda, {}, gt);
            increasing = increasing && v > prevv;
            prevv = v;
        }
        c.require("alpha increasing in b at lambda=" + fmt(lambda), increasing);
        // Linear vanishing at 0: the slope gamma1/gamma3 reaches ~5.7 at
        // lambda = 2, so the small-b gate is 0.08 with a halving check.
        double small = eval_alpha(0.01, lambda, {}, gt);
        double smaller = eval_alpha(0.005, lambda, {}, gt);
        c.require("alpha(0.01) small at lambda=" + fmt(lambda), small < 0.08, fmt(small));
        c.require("alpha halves with b at lambda=" + fmt(lambda),
                  smaller / small > 0.4 && smaller / small < 0.6);
    }
    const double h = 1e-4;
    for (double b : {0.5, 1.0, 2.0}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            double fd_a = (eval_alpha(b + h, lambda, {}, gt) - eval_alpha(b - h, lambda, {}, gt)) /
                          (2.0 * h);
            double an = alpha_partial_b(b, lambda, {}, gt);
            c.require("partial identity at (" + fmt(b) + "," + fmt(lambda) + ")",
                      std::fabs(fd_a / an - 1.0) < 1e-4, fmt(fd_a) + " vs " + fmt(an));
            double fd_j =
                (eval_J(1, b + h, lambda, {}, gt) - eval_J(1, b - h, lambda, {}, gt)) / (2.0 * h);
            double expected = -b * eval_J(3, b, lambda, {}, gt);
            c.require("dJ1/db = -b J3 at (" + fmt(b) + "," + fmt(lambda) + ")",
                      std::fabs(fd_j / expected - 1.0) < 1e-4);
        }
    }
}

// ---- 7: exploration-chain increments match the diffusion drift -------------

void criterion_drift_convergence(Checks& c, const VerifyOptions& opts) {
    const std::int64_t n_total = 100000;
    const double p = 1.0 / static_cast<double>(n_total); // lambda = 0
    const double t_max = 2.0;
    const std::int64_t replicas = 5000;
    const double n23 = std::pow(static_cast<double>(n_total), 2.0 / 3.0);
    const double n13 = std::cbrt(static_cast<double>(n_total));
    const std::int64_t horizon = static_cast<std::int64_t>(t_max * n23);

    const AlphaTable& alpha = shared_alpha_table(opts);
    AcyclicProbabilityProfile profile = AcyclicProbabilityProfile::build(n_total, p);
    SeparatedProbCache cache(profile, n_total - horizon - 1, n_total - 1,
                             static_cast<std::int64_t>(3.0 * n13));
    cache.prefill(opts.threads);

    std::vector<std::vector<std::int32_t>> prefixes(static_cast<std::size_t>(replicas));
    parallel_for_index(replicas, opts.threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(opts.seed, static_cast<std::uint64_t>(rep));
        prefixes[static_cast<std::size_t>(rep)] =
            simulate_kernel_chain(cache, n_total, horizon, rng);
    });

    auto predicted = [&](double t, double b) { return 0.0 - t - alpha.alpha(b, 0.0 - t); };
    IncrementStats st = empirical_increment_stats(prefixes, n_total, t_max, 8, 4.8, 12, 0.5,
                                                  predicted);

    std::int64_t jumps = 0;
    int drift_bins = 0, var_bins = 0, drift_bad = 0, var_bad = 0;
    double worst_drift_z = 0.0, worst_var_z = 0.0;
    for (const auto& bin : st.bins) {
        jumps += bin.jump_count;
        if (bin.count < 500) continue;
        ++drift_bins;
        double z = (bin.mean_scaled() - bin.mean_predicted()) / bin.se_scaled();
        worst_drift_z = std::max(worst_drift_z, std::fabs(z));
        if (std::fabs(z) > 3.0) ++drift_bad;
        ++var_bins;
        double zv = (bin.mean_sq() - 1.0) / bin.se_sq();
        worst_var_z = std::max(worst_var_z, std::fabs(zv));
        if (std::fabs(zv) > 3.0) ++var_bad;
    }
    c.require("drift within 3 SE in every populated bin", drift_bad == 0,
              std::to_string(drift_bad) + "/" + std::to_string(drift_bins) +
                  " bins out, worst |z| " + fmt(worst_drift_z));
    c.require("squared increments within 3 SE of 1", var_bad == 0,
              std::to_string(var_bad) + "/" + std::to_string(var_bins) +
                  " bins out, worst |z| " + fmt(worst_var_z));
    c.require("no macroscopic jumps at delta=0.5", jumps == 0, std::to_string(jumps) + " jumps");
    bool sticky_ok = true;
    double sticky_min = 1e300;
    for (const auto& sb : st.sticky) {
        if (sb.count < 500) continue;
        sticky_min = std::min(sticky_min, sb.mean_sq_next());
        sticky_ok = sticky_ok && sb.mean_sq_next() >= 0.4;
    }
    c.require("stickiness E[Z^2 | Z=0] >= 0.4", sticky_ok, "min " + fmt(sticky_min));
}

// ---- 8: component sizes against diffusion excursions ------------------------

void criterion_scaling_limit(Checks& c, const VerifyOptions& opts) {
    const std::int64_t n = 100000;
    const std::int64_t m = n / 2;
    const int samples = 2000;
    const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);

    std::vector<double> forest_rank1(samples), forest_rank2(samples);
    parallel_for_index(samples, opts.threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(opts.seed ^ 0xf0f0f0f0ULL, static_cast<std::uint64_t>(rep));
        Forest f = sample_forest_nm(nullptr, n, m, rng, ForestStrategy::Rejection);
        ExplorationTrace tr = explore(f);
        std::vector<std::int64_t> lens = excursion_lengths(tr);
        forest_rank1[static_cast<std::size_t>(rep)] = static_cast<double>(lens[0]) / n23;
        forest_rank2[static_cast<std::size_t>(rep)] =
            lens.size() > 1 ? static_cast<double>(lens[1]) / n23 : 0.0;
    });

    const AlphaTable& alpha = shared_alpha_table(opts);
    std::vector<double> diff_rank1(samples), diff_rank2(samples);
    parallel_for_index(samples, opts.threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(opts.seed ^ 0x0f0f0f0fULL, static_cast<std::uint64_t>(rep));
        DiffusionPath path = simulate_Z(0.0, 10.0, 1e-3, rng, alpha);
        ExcursionSet ex = diffusion_excursions(path, 2e-3);
        diff_rank1[static_cast<std::size_t>(rep)] = ex.lengths.empty() ? 0.0 : ex.lengths[0];
        diff_rank2[static_cast<std::size_t>(rep)] = ex.lengths.size() > 1 ? ex.lengths[1] : 0.0;
    });

    double ks1 = ks_distance(forest_rank1, diff_rank1);
    double ks2 = ks_distance(forest_rank2, diff_rank2);
    c.require("largest component vs largest excursion: KS <= 0.05", ks1 <= 0.05,
              "KS " + fmt(ks1));
    c.require("second largest: KS <= 0.05", ks2 <= 0.05, "KS " + fmt(ks2));
}

// ---- 9: coupling gates -------------------------------------------------------

void criterion_couplings(Checks& c, const VerifyOptions& opts) {
    // (a) sequential-addition cycle bound.
    {
        Rng rng(opts.seed ^ 0xabcdULL);
        const std::int64_t n = 1000, k = 10;
        const int trials = 1000;
        int cycles = 0;
        double bound_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            Forest f = sample_forest_nm(nullptr, n, 500, rng, ForestStrategy::Rejection);
            double s2 = component_square_sum(f);
            double x = 2.0 * static_cast<double>(k) * s2 /
                       (static_cast<double>(n) * static_cast<double>(n));
            bound_sum += x < 1.0 ? std::min(1.0, sequential_cycle_bound(s2, k, n)) : 1.0;
            UnionFind uf(n);
            for (const Edge& e : f.edges) uf.unite(e.first, e.second);
            for (std::int64_t j = 0; j < k; ++j) {
                auto u = static_cast<std::int32_t>(rng.below(n));
                auto v = static_cast<std::int32_t>(rng.below(n));
                if (u == v || !uf.unite(u, v)) {
                    ++cycles;
                    break;
                }
            }
        }
        double freq = static_cast<double>(cycles) / trials;
        double bound = bound_sum / trials;
        c.require("cycle frequency below the sequential bound", freq <= bound,
                  fmt(freq) + " vs bound " + fmt(bound));
    }
    // (b) almost-monotone success rate at n = 10^4.
    {
        const std::int64_t n = 10000, m = n / 2;
        const int trials = 200;
        std::vector<char> mono(trials, 0);
        parallel_for_index(trials, opts.threads, [&](std::int64_t t) {
            Rng rng = Rng::child(opts.seed ^ 0x5151ULL, static_cast<std::uint64_t>(t));
            mono[static_cast<std::size_t>(t)] =
                almost_monotone_triple(n, m, rng).monotone ? 1 : 0;
        });
        int ok = 0;
        for (char x : mono) ok += x;
        double rate = static_cast<double>(ok) / trials;
        c.require("monotone coupling rate >= 0.95", rate >= 0.95, "rate " + fmt(rate));
    }
    // (c) rejection embedding containment.
    {
        Rng rng(opts.seed ^ 0x7777ULL);
        const std::int64_t n = 2000;
        bool contained = true;
        for (int i = 0; i < 200; ++i) {
            EmbeddedForest ef = sample_forest_np_embedded(n, 1.0 / static_cast<double>(n), rng);
            std::set<Edge> amb(ef.ambient.edges.begin(), ef.ambient.edges.end());
            for (const Edge& e : ef.forest.edges) contained = contained && amb.count(e) > 0;
        }
        c.require("forest edges contained in the ambient graph", contained);
    }
}

// ---- 10: uniform trees against the Brownian excursion -----------------------

void criterion_tree_excursion(Checks& c, const VerifyOptions& opts) {
    const std::int64_t k = 10000;
    const int samples = 2000;
    std::vector<double> tree_maxima(samples), excursion_maxima(samples);
    parallel_for_index(samples, opts.threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(opts.seed ^ 0x1010ULL, static_cast<std::uint64_t>(rep));
        Forest t = sample_uniform_tree(k, rng);
        ExplorationTrace tr = explore(t);
        std::int32_t peak = 0;
        for (std::int32_t z : tr.stack_sizes) peak = std::max(peak, z);
        tree_maxima[static_cast<std::size_t>(rep)] =
            static_cast<double>(peak) / std::sqrt(static_cast<double>(k));
        Rng orng = Rng::child(opts.seed ^ 0x2020ULL, static_cast<std::uint64_t>(rep));
        excursion_maxima[static_cast<std::size_t>(rep)] =
            oracle::sample_brownian_excursion_max(static_cast<std::size_t>(k), orng);
    });
    double ks = ks_distance(tree_maxima, excursion_maxima);
    c.require("tree exploration maximum vs excursion maximum: KS <= 0.08", ks <= 0.08,
              "KS " + fmt(ks));
}

// ---- 11: sampler exactness ---------------------------------------------------

void criterion_sampler_exactness(Checks& c, const VerifyOptions& opts) {
    Rng rng(opts.seed ^ 0x9f9fULL);
    ForestCountTable table = ForestCountTable::build(5);
    std::vector<Forest> forests = oracle::all_forests(5, 3);
    std::map<std::vector<std::int64_t>, std::size_t> idx;
    for (std::size_t i = 0; i < forests.size(); ++i) idx[canonical_edge_key(forests[i])] = i;
    const std::int64_t samples = 50 * static_cast<std::int64_t>(forests.size());
    std::vector<std::int64_t> exact_counts(forests.size(), 0), rej_counts(forests.size(), 0);
    for (std::int64_t i = 0; i < samples; ++i) {
        exact_counts[idx.at(
            canonical_edge_key(sample_forest_nm(&table, 5, 3, rng, ForestStrategy::Exact)))]++;
        rej_counts[idx.at(
            canonical_edge_key(sample_forest_nm(&table, 5, 3, rng, ForestStrategy::Rejection)))]++;
    }
    double p_exact = chisq_uniform_pvalue(exact_counts);
    double p_rej = chisq_uniform_pvalue(rej_counts);
    double p_two = chisq_two_sample_pvalue(exact_counts, rej_counts);
    c.require("exact strategy uniform (p > 0.01)", p_exact > 0.01, "p " + fmt(p_exact));
    c.require("rejection strategy uniform (p > 0.01)", p_rej > 0.01, "p " + fmt(p_rej));
    c.require("strategies indistinguishable (p > 0.01)", p_two > 0.01, "p " + fmt(p_two));
}

// ---- 12: squared component sizes stay bounded -------------------------------

void criterion_l2_boundedness(Checks& c, const VerifyOptions& opts) {
    const int replicas = 500;
    std::vector<double> means;
    for (std::int64_t n : {1000, 10000, 100000}) {
        double p = 1.0 / static_cast<double>(n);
        std::vector<double> vals(replicas);
        parallel_for_index(replicas, opts.threads, [&](std::int64_t rep) {
            Rng rng = Rng::child(opts.seed ^ (0xe0e0ULL + static_cast<std::uint64_t>(n)),
                                 static_cast<std::uint64_t>(rep));
            Forest f = sample_forest_np(nullptr, n, p, rng, ForestStrategy::Rejection);
            vals[static_cast<std::size_t>(rep)] =
                component_square_sum(f) / std::pow(static_cast<double>(n), 4.0 / 3.0);
        });
        double mean = 0.0;
        for (double v : vals) mean += v;
        means.push_back(mean / replicas);
    }
    double lo = *std::min_element(means.begin(), means.end());
    double hi = *std::max_element(means.begin(), means.end());
    c.require("rescaled S^2 means within a factor-2 band", hi / lo <= 2.0,
              fmt(means[0]) + ", " + fmt(means[1]) + ", " + fmt(means[2]));
}

struct CriterionSpec {
    const char* name;
    const char* tier;
    void (*fn)(Checks&, const VerifyOptions&);
};

const CriterionSpec kSpecs[kCriterionCount] = {
    {"exact-count oracle (n <= 6)", "small", criterion_counts},
    {"tree-count identity (n <= 12)", "small", criterion_cayley},
    {"event formulas vs enumeration (n = 5, 6)", "small", criterion_formulas},
    {"stable density normalization/positivity/decay", "small", criterion_density},
    {"window asymptotics sharpen with n", "medium", criterion_asymptotics},
    {"drift-correction calculus", "small", criterion_alpha},
    {"chain increments match the corrected drift (n = 1e5)", "large",
     criterion_drift_convergence},
    {"component sizes vs diffusion excursions (n = 1e5)", "large", criterion_scaling_limit},
    {"coupling gates", "small", criterion_couplings},
    {"uniform trees vs Brownian excursion maxima", "medium", criterion_tree_excursion},
    {"forest sampler exactness at (5, 3)", "small", criterion_sampler_exactness},
    {"rescaled S^2 bounded across three decades", "medium", criterion_l2_boundedness},
};

} // namespace

CriterionResult run_criterion(int id, const VerifyOptions& opts) {
    if (id < 1 || id > kCriterionCount) throw DomainError("run_criterion: id out of range");
    const CriterionSpec& spec = kSpecs[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = spec.name;
    r.tier = spec.tier;
    Checks checks;
    auto start = std::chrono::steady_clock::now();
    try {
        spec.fn(checks, opts);
        r.pass = checks.ok();
        r.detail = checks.summary();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<int> criteria_for_tier(const std::string& tier) {
    auto rank = [](const std::string& t) {
        if (t == "small") return 0;
        if (t == "medium") return 1;
        return 2; // large / all
    };
    int want = rank(tier);
    std::vector<int> out;
    for (int id = 1; id <= kCriterionCount; ++id)
        if (rank(kSpecs[id - 1].tier) <= want) out.push_back(id);
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << "criterion " << r.id << " [" << r.tier << "] " << (r.pass ? "PASS" : "FAIL") << " ("
       << std::fixed << r.seconds << "s) " << r.name << " -- " << r.detail;
    return os.str();
}

} // namespace crf::verify
