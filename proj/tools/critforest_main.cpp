// critforest: samplers, exact counts, drift calculus and diffusion
// simulation for critical random forests, with a verification suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "crf/analysis.hpp"
#include "crf/diffusion.hpp"
#include "crf/drift.hpp"
#include "crf/errors.hpp"
#include "crf/exploration.hpp"
#include "crf/forest_counts.hpp"
#include "crf/io.hpp"
#include "crf/parallel.hpp"
#include "crf/samplers.hpp"
#include "verify/criteria.hpp"
#include "verify/oracles.hpp"

using json = nlohmann::ordered_json;
using namespace crf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAccuracy = 4;
constexpr int kExitCapacity = 5;

// Resolved-configuration record: every subcommand fills one of these and the
// manifest embedded in outputs hashes it.
json g_config;

Manifest make_manifest(std::uint64_t seed) {
    Manifest m;
    m.config_json = g_config.dump();
    m.seed = seed;
    return m;
}

void set_cfg(const std::string& key, const json& value) { g_config[key] = value; }

// Grid spec "lo:hi:step".
std::vector<double> parse_grid(const std::string& spec) {
    double lo, hi, step;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
        throw DomainError("bad grid spec (expected lo:hi:step): " + spec);
    std::vector<double> out;
    for (double x = lo; x <= hi + 1e-12 * step; x += step) out.push_back(x);
    return out;
}

void emit_json(const json& payload, const std::string& path) {
    std::string text = payload.dump(2);
    text += '\n';
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot open for writing: " + path);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
}

json edges_out(const Graph& g) {
    json out = json::array();
    for (const Edge& e : g.edges)
        out.push_back(json::array({std::min(e.first, e.second), std::max(e.first, e.second)}));
    return out;
}

json error_json(const std::string& kind, const std::string& message) {
    json e;
    e["schema_version"] = 1;
    e["error"] = kind;
    e["message"] = message;
    return e;
}

int run_oracle(std::int64_t max_n, bool acyclic_mode, const std::vector<double>& p_list,
               std::int64_t stride, const std::string& out, int threads) {
    ForestCountTable table = ForestCountTable::build(max_n, threads);
    Manifest manifest = make_manifest(0);
    if (!acyclic_mode) {
        CsvWriter csv(out, manifest, {"n", "m", "exact_log_count", "britikov_log", "ratio",
                                      "in_window"});
        for (std::int64_t n = 2; n <= max_n; n += stride) {
            for (std::int64_t m = 0; m <= n - 1; ++m) {
                double exact = table.log_count(n, m);
                AsymptoticCount est = britikov_log_count(n, m);
                double ratio = std::exp(exact - est.log_value);
                csv.row({std::to_string(n), std::to_string(m), CsvWriter::format_double(exact),
                         CsvWriter::format_double(est.log_value), CsvWriter::format_double(ratio),
                         est.in_window ? "1" : "0"});
            }
        }
    } else {
        CsvWriter csv(out, manifest, {"n", "p", "exact", "asymptotic"});
        for (std::int64_t n = 2; n <= max_n; n += stride) {
            for (double p : p_list) {
                csv.row({std::to_string(n), CsvWriter::format_double(p),
                         CsvWriter::format_double(acyclic_probability(table, n, p)),
                         CsvWriter::format_double(acyclic_probability_asymptotic(n, p))});
            }
        }
    }
    return kExitOk;
}

int run_eval_g(double from, double to, double step, const std::string& out) {
    Manifest manifest = make_manifest(0);
    CsvWriter csv(out, manifest, {"x", "g"});
    for (double x = from; x <= to + 1e-12 * step; x += step)
        csv.row({CsvWriter::format_double(x), CsvWriter::format_double(eval_g(x))});
    return kExitOk;
}

int run_eval_alpha(const std::string& b_grid, const std::string& lambda_grid,
                   const std::string& out, const std::string& table_out, int threads) {
    const StableDensityTable* gt = make_drift_gtable().get();
    if (!table_out.empty()) {
        AlphaTable table = AlphaTable::build(AlphaTable::GridSpec{}, DriftEvalConfig{}, threads);
        table.save(table_out);
    }
    if (!b_grid.empty()) {
        Manifest manifest = make_manifest(0);
        CsvWriter csv(out, manifest, {"b", "lambda", "alpha", "dalpha_db"});
        for (double b : parse_grid(b_grid)) {
            for (double lambda : parse_grid(lambda_grid)) {
                csv.row({CsvWriter::format_double(b), CsvWriter::format_double(lambda),
                         CsvWriter::format_double(eval_alpha(b, lambda, {}, gt)),
                         CsvWriter::format_double(alpha_partial_b(b, lambda, {}, gt))});
            }
        }
    }
    return kExitOk;
}

int run_sample_forest(std::int64_t n, std::int64_t m, double p, std::int64_t count,
                      std::uint64_t seed, const std::string& out, const std::string& format,
                      const std::string& strategy_name, int threads) {
    ForestStrategy strategy = ForestStrategy::Auto;
    if (strategy_name == "exact") strategy = ForestStrategy::Exact;
    else if (strategy_name == "rejection") strategy = ForestStrategy::Rejection;
    else if (strategy_name != "auto") throw DomainError("unknown strategy: " + strategy_name);

    std::optional<ForestCountTable> table;
    bool want_exact = strategy == ForestStrategy::Exact ||
                      (strategy == ForestStrategy::Auto && n <= 5000);
    if (want_exact) table = ForestCountTable::build(n, threads);

    std::vector<Forest> forests(static_cast<std::size_t>(count));
    parallel_for_index(count, threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(seed, static_cast<std::uint64_t>(rep));
        const ForestCountTable* t = table ? &*table : nullptr;
        forests[static_cast<std::size_t>(rep)] =
            m >= 0 ? sample_forest_nm(t, n, m, rng, strategy)
                   : sample_forest_np(t, n, p, rng, strategy);
    });
    Manifest manifest = make_manifest(seed);
    if (format == "binary") {
        write_forest_file(out.empty() ? "forests.bin" : out, forests, manifest);
    } else {
        write_edge_list(out.empty() ? "-" : out, forests, manifest);
    }
    return kExitOk;
}

std::vector<Forest> read_forests_any(const std::string& path) {
    // Binary container or line-oriented edge list, detected by magic bytes.
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DomainError("cannot open: " + path);
    char head[8] = {0};
    probe.read(head, 8);
    probe.close();
    if (std::string(head, 4) == "CRFF") return read_forest_file(path);
    std::ifstream in(path);
    std::vector<Forest> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# n ", 0) == 0) {
            Forest f;
            std::sscanf(line.c_str(), "# n %ld", &f.n_vertices);
            out.push_back(f);
        } else if (!line.empty() && line[0] != '#') {
            if (out.empty()) throw DomainError("edge before any '# n' header in " + path);
            long u, v;
            if (std::sscanf(line.c_str(), "%ld %ld", &u, &v) != 2)
                throw DomainError("bad edge line: " + line);
            out.back().edges.emplace_back(static_cast<std::int32_t>(u),
                                          static_cast<std::int32_t>(v));
        }
    }
    return out;
}

int run_explore(const std::string& in, const std::string& out) {
    std::vector<Forest> forests = read_forests_any(in);
    Manifest manifest = make_manifest(0);
    CsvWriter csv(out, manifest, {"forest", "step", "z"});
    for (std::size_t i = 0; i < forests.size(); ++i) {
        ExplorationTrace tr = explore(forests[i]);
        for (std::size_t s = 0; s < tr.stack_sizes.size(); ++s)
            csv.row({std::to_string(i), std::to_string(s), std::to_string(tr.stack_sizes[s])});
    }
    return kExitOk;
}

json stats_to_json(const IncrementStats& st, bool with_predictions) {
    json bins = json::array();
    for (int ti = 0; ti < st.time_bins; ++ti) {
        for (int bi = 0; bi < st.height_bins; ++bi) {
            const IncrementBin& b = st.bins[static_cast<std::size_t>(ti * st.height_bins + bi)];
            if (b.count == 0) continue;
            json row;
            row["t_lo"] = st.t_max * ti / st.time_bins;
            row["t_hi"] = st.t_max * (ti + 1) / st.time_bins;
            row["b_lo"] = st.b_max * bi / st.height_bins;
            row["b_hi"] = st.b_max * (bi + 1) / st.height_bins;
            row["count"] = b.count;
            row["mean_scaled_increment"] = b.mean_scaled();
            row["se_scaled_increment"] = b.se_scaled();
            row["mean_sq_increment"] = b.mean_sq();
            row["se_sq_increment"] = b.se_sq();
            row["jump_count"] = b.jump_count;
            if (with_predictions) row["mean_predicted_drift"] = b.mean_predicted();
            bins.push_back(row);
        }
    }
    json sticky = json::array();
    for (int ti = 0; ti < st.time_bins; ++ti) {
        const StickyBin& s = st.sticky[static_cast<std::size_t>(ti)];
        if (s.count == 0) continue;
        json row;
        row["t_lo"] = st.t_max * ti / st.time_bins;
        row["t_hi"] = st.t_max * (ti + 1) / st.time_bins;
        row["count"] = s.count;
        row["mean_sq_next"] = s.mean_sq_next();
        sticky.push_back(row);
    }
    json out;
    out["bins"] = bins;
    out["sticky"] = sticky;
    return out;
}

int run_simulate_kernel(std::int64_t n, double lambda, double horizon_t, std::int64_t replicas,
                        std::uint64_t seed, const std::string& alpha_table_path,
                        const std::string& out, int threads) {
    double nn = static_cast<double>(n);
    double p = (1.0 + lambda / std::cbrt(nn)) / nn;
    if (!(p > 0.0) || p >= 1.0) throw DomainError("simulate-kernel: lambda puts p outside (0,1)");
    std::int64_t horizon = static_cast<std::int64_t>(horizon_t * std::pow(nn, 2.0 / 3.0));
    if (horizon > n) throw DomainError("simulate-kernel: horizon exceeds n");

    AcyclicProbabilityProfile profile = AcyclicProbabilityProfile::build(n, p);
    SeparatedProbCache cache(profile, std::max<std::int64_t>(0, n - horizon - 1), n - 1,
                             static_cast<std::int64_t>(3.0 * std::cbrt(nn)) + 8);
    cache.prefill(threads);

    std::vector<std::vector<std::int32_t>> prefixes(static_cast<std::size_t>(replicas));
    parallel_for_index(replicas, threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(seed, static_cast<std::uint64_t>(rep));
        prefixes[static_cast<std::size_t>(rep)] = simulate_kernel_chain(cache, n, horizon, rng);
    });

    std::optional<AlphaTable> alpha;
    if (!alpha_table_path.empty()) alpha = AlphaTable::load(alpha_table_path);
    std::function<double(double, double)> predicted;
    if (alpha)
        predicted = [&](double t, double b) { return lambda - t - alpha->alpha(b, lambda - t); };

    IncrementStats st =
        empirical_increment_stats(prefixes, n, horizon_t, 8, 4.8, 12, 0.5, predicted);

    double n23 = std::pow(nn, 2.0 / 3.0);
    json reps = json::array();
    for (const auto& z : prefixes) {
        // Rescaled gaps between successive zeros of the prefix; the trailing
        // partial excursion (if any) is flagged separately.
        json lengths = json::array();
        std::int64_t prev_zero = 0;
        for (std::size_t i = 1; i < z.size(); ++i) {
            if (z[i] == 0) {
                lengths.push_back(static_cast<double>(static_cast<std::int64_t>(i) - prev_zero) /
                                  n23);
                prev_zero = static_cast<std::int64_t>(i);
            }
        }
        json rec;
        rec["excursions"] = lengths;
        rec["open_tail"] =
            static_cast<double>(static_cast<std::int64_t>(z.size()) - 1 - prev_zero) / n23;
        reps.push_back(rec);
    }

    json payload;
    payload["schema_version"] = 1;
    payload["manifest"] = json::parse(make_manifest(seed).to_json());
    payload["n"] = n;
    payload["lambda"] = lambda;
    payload["horizon_t"] = horizon_t;
    payload["replicas"] = reps;
    payload["stats"] = stats_to_json(st, alpha.has_value());
    emit_json(payload, out);
    return kExitOk;
}

int run_simulate_diffusion(double lambda, double horizon, double dt, std::int64_t replicas,
                           std::uint64_t seed, const std::string& out,
                           const std::string& raw_paths, const std::string& cache_dir,
                           int threads) {
    // The drift table is built once (or loaded from the cache directory).
    verify::VerifyOptions vopts;
    vopts.threads = threads;
    vopts.cache_dir = cache_dir;
    std::filesystem::path cache =
        std::filesystem::path(cache_dir) / "critforest_alpha_default.bin";
    std::optional<AlphaTable> alpha;
    if (std::filesystem::exists(cache)) {
        try {
            alpha = AlphaTable::load(cache.string());
        } catch (const std::exception&) {
        }
    }
    if (!alpha) {
        alpha = AlphaTable::build(AlphaTable::GridSpec{}, DriftEvalConfig{}, threads);
        try {
            alpha->save(cache.string());
        } catch (const std::exception&) {
        }
    }

    std::vector<DiffusionPath> paths(static_cast<std::size_t>(replicas));
    parallel_for_index(replicas, threads, [&](std::int64_t rep) {
        Rng rng = Rng::child(seed, static_cast<std::uint64_t>(rep));
        paths[static_cast<std::size_t>(rep)] = simulate_Z(lambda, horizon, dt, rng, *alpha);
    });

    json reps = json::array();
    for (const auto& p : paths) {
        ExcursionSet ex = diffusion_excursions(p, 2.0 * dt);
        json rec;
        rec["excursions"] = ex.lengths;
        reps.push_back(rec);
    }
    json payload;
    payload["schema_version"] = 1;
    payload["manifest"] = json::parse(make_manifest(seed).to_json());
    payload["lambda"] = lambda;
    payload["horizon"] = horizon;
    payload["dt"] = dt;
    payload["replicas"] = reps;
    emit_json(payload, out);

    if (!raw_paths.empty()) {
        std::vector<std::vector<double>> values;
        values.reserve(paths.size());
        for (const auto& p : paths) values.push_back(p.values);
        write_path_file(raw_paths, values, lambda, dt, make_manifest(seed));
    }
    return kExitOk;
}

std::vector<std::vector<double>> load_replica_lengths(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open: " + path);
    json j = json::parse(in, nullptr, true, true);
    if (!j.contains("replicas")) throw DomainError("no 'replicas' array in " + path);
    std::vector<std::vector<double>> out;
    for (const auto& rec : j["replicas"]) {
        std::vector<double> lens;
        const json& src = rec.is_object() ? rec.at("excursions") : rec;
        for (const auto& v : src) lens.push_back(v.get<double>());
        std::sort(lens.begin(), lens.end(), std::greater<>());
        out.push_back(std::move(lens));
    }
    return out;
}

int run_compare(const std::string& left, const std::string& right, const std::string& stat,
                int rank, double gate, std::uint64_t seed, const std::string& out) {
    auto a = load_replica_lengths(left);
    auto b = load_replica_lengths(right);
    json payload;
    payload["schema_version"] = 1;
    payload["manifest"] = json::parse(make_manifest(seed).to_json());
    payload["left"] = left;
    payload["right"] = right;
    payload["stat"] = stat;
    if (stat == "ks") {
        auto rank_values = [&](const std::vector<std::vector<double>>& sample) {
            std::vector<double> v;
            v.reserve(sample.size());
            for (const auto& lens : sample)
                v.push_back(static_cast<std::size_t>(rank) <= lens.size()
                                ? lens[static_cast<std::size_t>(rank) - 1]
                                : 0.0);
            return v;
        };
        std::vector<double> va = rank_values(a), vb = rank_values(b);
        double ks = ks_distance(va, vb);
        Rng rng(seed);
        double pvalue = ks_permutation_pvalue(va, vb, 500, rng);
        payload["rank"] = rank;
        payload["statistic"] = ks;
        payload["permutation_pvalue"] = pvalue;
        payload["gate"] = gate;
        payload["pass"] = ks <= gate;
    } else if (stat == "spectrum") {
        SizeSample sa{a}, sb{b};
        auto speca = component_spectrum(sa, static_cast<std::size_t>(rank));
        auto specb = component_spectrum(sb, static_cast<std::size_t>(rank));
        json rows = json::array();
        bool pass = true;
        for (int r = 0; r < rank; ++r) {
            json row;
            row["rank"] = r + 1;
            row["left_mean"] = speca[static_cast<std::size_t>(r)].mean;
            row["right_mean"] = specb[static_cast<std::size_t>(r)].mean;
            row["left_median"] = speca[static_cast<std::size_t>(r)].median;
            row["right_median"] = specb[static_cast<std::size_t>(r)].median;
            double denom = std::max(speca[static_cast<std::size_t>(r)].mean,
                                    specb[static_cast<std::size_t>(r)].mean);
            double rel = denom > 0 ? std::fabs(speca[static_cast<std::size_t>(r)].mean -
                                               specb[static_cast<std::size_t>(r)].mean) /
                                         denom
                                   : 0.0;
            row["relative_mean_gap"] = rel;
            pass = pass && rel <= gate;
            rows.push_back(row);
        }
        payload["ranks"] = rows;
        payload["gate"] = gate;
        payload["pass"] = pass;
    } else {
        throw DomainError("unknown --stat (expected ks or spectrum): " + stat);
    }
    emit_json(payload, out);
    return kExitOk;
}

// Search for a stochastic-domination counterexample between conditioned
// forests at p and p + dp over principal up-sets {H : H contains F}, by
// exhaustive enumeration. Whether the domination holds in general is open;
// this reports violations if any principal up-set exhibits one and stays
// silent on the rest.
int run_domination_search(std::int64_t n, double p_lo, double p_hi, double p_step, double dp,
                          const std::string& out) {
    if (n < 2 || n > 6) throw DomainError("domination-search: enumeration limited to 2 <= n <= 6");
    std::vector<Forest> forests;
    for (const Graph& g : crf::oracle::all_graphs(n)) {
        if (is_forest(g)) {
            Forest f;
            f.n_vertices = n;
            f.edges = g.edges;
            forests.push_back(std::move(f));
        }
    }
    // Bitmask per forest over the C(n,2) slot order.
    auto slot_index = [n](const Edge& e) {
        std::int64_t i = std::min(e.first, e.second), j = std::max(e.first, e.second);
        return static_cast<std::uint32_t>(i * (2 * n - i - 1) / 2 + (j - i - 1));
    };
    std::vector<std::uint32_t> masks;
    masks.reserve(forests.size());
    for (const Forest& f : forests) {
        std::uint32_t m = 0;
        for (const Edge& e : f.edges) m |= 1u << slot_index(e);
        masks.push_back(m);
    }
    auto containment_prob = [&](double p, std::uint32_t fmask) {
        double logw = std::log(p) - std::log1p(-p);
        double num = 0.0, den = 0.0;
        for (std::size_t h = 0; h < forests.size(); ++h) {
            double w = std::exp(static_cast<double>(forests[h].edges.size()) * logw);
            den += w;
            if ((masks[h] & fmask) == fmask) num += w;
        }
        return num / den;
    };

    json records = json::array();
    double worst_margin = 1.0;
    json worst;
    for (double p = p_lo; p <= p_hi + 1e-12; p += p_step) {
        for (std::size_t fi = 0; fi < forests.size(); ++fi) {
            if (forests[fi].edges.empty()) continue; // trivial up-set, probability 1
            double lo = containment_prob(p, masks[fi]);
            double hi = containment_prob(p + dp, masks[fi]);
            double margin = hi - lo;
            if (margin < worst_margin) {
                worst_margin = margin;
                worst = json{{"p", p},
                             {"p_prime", p + dp},
                             {"forest_edges", edges_out(forests[fi])},
                             {"prob_at_p", lo},
                             {"prob_at_p_prime", hi},
                             {"margin", margin}};
            }
            if (margin < 0.0)
                records.push_back(json{{"p", p},
                                       {"p_prime", p + dp},
                                       {"forest_edges", edges_out(forests[fi])},
                                       {"margin", margin}});
        }
    }
    json payload;
    payload["schema_version"] = 1;
    payload["manifest"] = json::parse(make_manifest(0).to_json());
    payload["n"] = n;
    payload["up_sets"] = "principal (containment events) only; absence of a violation here is inconclusive";
    payload["counterexamples"] = records;
    payload["tightest_margin"] = worst;
    payload["verdict"] = records.empty() ? "no counterexample among principal up-sets"
                                         : "counterexample found";
    emit_json(payload, out);
    return kExitOk;
}

int run_verify(const std::string& tier, std::uint64_t seed, const std::string& cache_dir,
               int threads) {
    verify::VerifyOptions opts;
    opts.threads = threads;
    opts.seed = seed;
    opts.cache_dir = cache_dir;
    bool all = true;
    for (int id : verify::criteria_for_tier(tier)) {
        verify::CriterionResult r = verify::run_criterion(id, opts);
        std::printf("%s\n", verify::format_result_line(r).c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical random forest toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    // Later occurrences override earlier ones, so explicit flags beat
    // config-file values.
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    int threads = default_thread_count();
    if (const char* env = std::getenv("CRITFOREST_THREADS")) threads = std::atoi(env);
    std::string cache_dir = ".";
    if (const char* env = std::getenv("CRITFOREST_CACHE_DIR")) cache_dir = env;
    app.add_option("--threads", threads, "worker threads");
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; explicit flags win");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "exact counts against the window estimate");
    std::int64_t o_max_n = 200;
    bool o_acyclic = false;
    std::vector<double> o_p_list = {0.1, 0.3, 0.5};
    std::int64_t o_stride = 1;
    std::string o_out = "-";
    oracle_cmd->add_option("--max-n", o_max_n);
    oracle_cmd->add_flag("--acyclic", o_acyclic, "emit acyclic probabilities instead of counts");
    oracle_cmd->add_option("--p", o_p_list, "probabilities for --acyclic");
    oracle_cmd->add_option("--stride", o_stride, "emit every stride-th n");
    oracle_cmd->add_option("--out", o_out);

    // eval-g
    auto* evalg_cmd = app.add_subcommand("eval-g", "stable density values on a grid");
    double eg_from = -5.0, eg_to = 5.0, eg_step = 0.1;
    std::string eg_out = "-";
    evalg_cmd->add_option("--from", eg_from);
    evalg_cmd->add_option("--to", eg_to);
    evalg_cmd->add_option("--step", eg_step);
    evalg_cmd->add_option("--out", eg_out);

    // eval-alpha
    auto* evala_cmd = app.add_subcommand("eval-alpha", "drift correction on a grid");
    std::string ea_b = "0.1:3:0.1", ea_lambda = "-2:2:0.5", ea_out = "-", ea_table;
    evala_cmd->add_option("--b-grid", ea_b, "lo:hi:step");
    evala_cmd->add_option("--lambda-grid", ea_lambda, "lo:hi:step");
    evala_cmd->add_option("--out", ea_out);
    evala_cmd->add_option("--table", ea_table, "persist the interpolation table here");

    // sample-forest
    auto* sf_cmd = app.add_subcommand("sample-forest", "uniform / conditioned forest samples");
    std::int64_t sf_n = 100, sf_m = -1, sf_count = 1;
    double sf_p = -1.0;
    std::uint64_t sf_seed = 1;
    std::string sf_out, sf_format = "edges", sf_strategy = "auto";
    sf_cmd->add_option("--n", sf_n)->required();
    sf_cmd->add_option("--m", sf_m);
    sf_cmd->add_option("--p", sf_p);
    sf_cmd->add_option("--count", sf_count);
    sf_cmd->add_option("--seed", sf_seed);
    sf_cmd->add_option("--out", sf_out);
    sf_cmd->add_option("--format", sf_format, "edges | binary");
    sf_cmd->add_option("--strategy", sf_strategy, "auto | exact | rejection");

    // explore
    auto* ex_cmd = app.add_subcommand("explore", "stack-size trace of stored forests");
    std::string ex_in, ex_out = "-";
    ex_cmd->add_option("--in", ex_in)->required();
    ex_cmd->add_option("--out", ex_out);

    // simulate-kernel
    auto* sk_cmd = app.add_subcommand("simulate-kernel", "exploration chain from the exact kernel");
    std::int64_t sk_n = 10000, sk_replicas = 100;
    double sk_lambda = 0.0, sk_horizon_t = 1.0;
    std::uint64_t sk_seed = 1;
    std::string sk_out = "-", sk_alpha_table;
    sk_cmd->add_option("--n", sk_n);
    sk_cmd->add_option("--lambda", sk_lambda);
    sk_cmd->add_option("--horizon-t", sk_horizon_t);
    sk_cmd->add_option("--replicas", sk_replicas);
    sk_cmd->add_option("--seed", sk_seed);
    sk_cmd->add_option("--alpha-table", sk_alpha_table, "adds drift predictions to the bins");
    sk_cmd->add_option("--out", sk_out);

    // simulate-diffusion
    auto* sd_cmd = app.add_subcommand("simulate-diffusion", "reflected diffusion excursions");
    double sd_lambda = 0.0, sd_T = 10.0, sd_dt = 1e-3;
    std::int64_t sd_replicas = 100;
    std::uint64_t sd_seed = 1;
    std::string sd_out = "-", sd_raw;
    sd_cmd->add_option("--lambda", sd_lambda);
    sd_cmd->add_option("--T", sd_T);
    sd_cmd->add_option("--dt", sd_dt);
    sd_cmd->add_option("--replicas", sd_replicas);
    sd_cmd->add_option("--seed", sd_seed);
    sd_cmd->add_option("--out", sd_out);
    sd_cmd->add_option("--raw-paths", sd_raw, "also write raw paths (binary)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "two-sample verdicts over stored ensembles");
    std::string cmp_left, cmp_right, cmp_stat = "ks", cmp_out = "-";
    int cmp_rank = 1;
    double cmp_gate = 0.05;
    std::uint64_t cmp_seed = 1;
    cmp_cmd->add_option("--left", cmp_left)->required();
    cmp_cmd->add_option("--right", cmp_right)->required();
    cmp_cmd->add_option("--stat", cmp_stat, "ks | spectrum");
    cmp_cmd->add_option("--rank", cmp_rank);
    cmp_cmd->add_option("--gate", cmp_gate);
    cmp_cmd->add_option("--seed", cmp_seed);
    cmp_cmd->add_option("--out", cmp_out);

    // domination-search
    auto* dom_cmd = app.add_subcommand(
        "domination-search", "look for conditioned-forest domination counterexamples at small n");
    std::int64_t dom_n = 5;
    double dom_p_lo = 0.1, dom_p_hi = 0.5, dom_p_step = 0.1, dom_dp = 0.05;
    std::string dom_out = "-";
    dom_cmd->add_option("--n", dom_n);
    dom_cmd->add_option("--p-lo", dom_p_lo);
    dom_cmd->add_option("--p-hi", dom_p_hi);
    dom_cmd->add_option("--p-step", dom_p_step);
    dom_cmd->add_option("--dp", dom_dp);
    dom_cmd->add_option("--out", dom_out);

    // verify
    auto* vf_cmd = app.add_subcommand("verify", "run the acceptance checklist");
    std::string vf_tier = "small";
    std::uint64_t vf_seed = 20250808;
    vf_cmd->add_option("--tier", vf_tier, "small | medium | large | all");
    vf_cmd->add_option("--seed", vf_seed);

    // Config file: its values are injected right after the subcommand token,
    // so any explicit flag that follows wins. Works with --config placed
    // before or after the subcommand.
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::string config_file;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "--config") {
            config_file = tokens[i + 1];
            break;
        }
    }
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
            emit_json(error_json("config", "cannot open config file " + config_file), "-");
            return kExitUsage;
        }
        try {
            json cfg = json::parse(in);
            std::vector<std::string> cfg_args;
            for (auto& [key, value] : cfg.items()) {
                cfg_args.push_back("--" + key);
                if (!value.is_boolean())
                    cfg_args.push_back(value.is_string() ? value.get<std::string>()
                                                         : value.dump());
            }
            // The subcommand is the first bare token that is not the value of
            // an app-level flag.
            std::size_t sub_pos = tokens.size();
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                if (tokens[i] == "--config" || tokens[i] == "--threads") {
                    ++i;
                    continue;
                }
                if (!tokens[i].empty() && tokens[i][0] != '-') {
                    sub_pos = i;
                    break;
                }
            }
            if (sub_pos < tokens.size())
                tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1,
                              cfg_args.begin(), cfg_args.end());
        } catch (const json::exception& e) {
            emit_json(error_json("config", e.what()), "-");
            return kExitUsage;
        }
    }
    std::vector<char*> parse_argv;
    parse_argv.push_back(argv[0]);
    for (auto& t : tokens) parse_argv.push_back(t.data());
    try {
        app.parse(static_cast<int>(parse_argv.size()), parse_argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (oracle_cmd->parsed()) {
            set_cfg("command", "oracle");
            set_cfg("max_n", o_max_n);
            set_cfg("acyclic", o_acyclic);
            set_cfg("p", o_p_list);
            set_cfg("stride", o_stride);
            return run_oracle(o_max_n, o_acyclic, o_p_list, o_stride, o_out, threads);
        }
        if (evalg_cmd->parsed()) {
            set_cfg("command", "eval-g");
            set_cfg("from", eg_from);
            set_cfg("to", eg_to);
            set_cfg("step", eg_step);
            return run_eval_g(eg_from, eg_to, eg_step, eg_out);
        }
        if (evala_cmd->parsed()) {
            set_cfg("command", "eval-alpha");
            set_cfg("b_grid", ea_b);
            set_cfg("lambda_grid", ea_lambda);
            return run_eval_alpha(ea_b, ea_lambda, ea_out, ea_table, threads);
        }
        if (sf_cmd->parsed()) {
            if ((sf_m >= 0) == (sf_p > 0.0))
                throw DomainError("sample-forest: exactly one of --m / --p is required");
            set_cfg("command", "sample-forest");
            set_cfg("n", sf_n);
            set_cfg("m", sf_m);
            set_cfg("p", sf_p);
            set_cfg("count", sf_count);
            set_cfg("strategy", sf_strategy);
            set_cfg("format", sf_format);
            return run_sample_forest(sf_n, sf_m, sf_p, sf_count, sf_seed, sf_out, sf_format,
                                     sf_strategy, threads);
        }
        if (ex_cmd->parsed()) {
            set_cfg("command", "explore");
            set_cfg("in", ex_in);
            return run_explore(ex_in, ex_out);
        }
        if (sk_cmd->parsed()) {
            set_cfg("command", "simulate-kernel");
            set_cfg("n", sk_n);
            set_cfg("lambda", sk_lambda);
            set_cfg("horizon_t", sk_horizon_t);
            set_cfg("replicas", sk_replicas);
            return run_simulate_kernel(sk_n, sk_lambda, sk_horizon_t, sk_replicas, sk_seed,
                                       sk_alpha_table, sk_out, threads);
        }
        if (sd_cmd->parsed()) {
            set_cfg("command", "simulate-diffusion");
            set_cfg("lambda", sd_lambda);
            set_cfg("T", sd_T);
            set_cfg("dt", sd_dt);
            set_cfg("replicas", sd_replicas);
            return run_simulate_diffusion(sd_lambda, sd_T, sd_dt, sd_replicas, sd_seed, sd_out,
                                          sd_raw, cache_dir, threads);
        }
        if (cmp_cmd->parsed()) {
            set_cfg("command", "compare");
            set_cfg("stat", cmp_stat);
            set_cfg("rank", cmp_rank);
            set_cfg("gate", cmp_gate);
            return run_compare(cmp_left, cmp_right, cmp_stat, cmp_rank, cmp_gate, cmp_seed,
                               cmp_out);
        }
        if (dom_cmd->parsed()) {
            set_cfg("command", "domination-search");
            set_cfg("n", dom_n);
            set_cfg("dp", dom_dp);
            return run_domination_search(dom_n, dom_p_lo, dom_p_hi, dom_p_step, dom_dp, dom_out);
        }
        if (vf_cmd->parsed()) {
            set_cfg("command", "verify");
            set_cfg("tier", vf_tier);
            return run_verify(vf_tier, vf_seed, cache_dir, threads);
        }
    } catch (const DomainError& e) {
        emit_json(error_json("domain", e.what()), "-");
        return kExitDomain;
    } catch (const CapacityError& e) {
        emit_json(error_json("capacity", e.what()), "-");
        return kExitCapacity;
    } catch (const BudgetError& e) {
        emit_json(error_json("budget", e.what()), "-");
        return kExitAccuracy;
    } catch (const AccuracyError& e) {
        emit_json(error_json("accuracy", e.what()), "-");
        return kExitAccuracy;
    } catch (const std::exception& e) {
        emit_json(error_json("internal", e.what()), "-");
        return 1;
    }
    return kExitUsage;
}
