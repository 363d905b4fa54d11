#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crf/analysis.hpp"
#include "crf/diffusion.hpp"
#include "crf/drift.hpp"
#include "crf/errors.hpp"
#include "crf/exploration.hpp"
#include "crf/forest_counts.hpp"
#include "crf/graph.hpp"
#include "crf/io.hpp"
#include "crf/samplers.hpp"
#include "crf/stable_density.hpp"

namespace py = pybind11;
using namespace crf;

namespace {

std::vector<std::pair<std::int64_t, std::int64_t>> edges_out(const Graph& g) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(g.edges.size());
    for (const Edge& e : g.edges) out.emplace_back(e.first, e.second);
    return out;
}

Forest forest_in(std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
    Forest f;
    f.n_vertices = n;
    for (const auto& e : edges)
        f.edges.emplace_back(static_cast<std::int32_t>(e.first),
                             static_cast<std::int32_t>(e.second));
    return f;
}

} // namespace

PYBIND11_MODULE(_critforest, m) {
    m.doc() = "critical random forests: exact counts, samplers, drift calculus, diffusions";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);

    m.attr("__version__") = kVersion;

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed") = 0x853c49e6748fea9bULL)
        .def_static("child", &Rng::child, py::arg("root_seed"), py::arg("index"))
        .def("normal", &Rng::normal)
        .def("u01", &Rng::u01);

    // Stable density.
    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
        .def_readwrite("truncation_tail", &QuadratureConfig::truncation_tail)
        .def_readwrite("max_subdivisions", &QuadratureConfig::max_subdivisions);
    m.def("eval_g", [](double x) { return eval_g(x); }, py::arg("x"));
    m.def("eval_g", [](double x, const QuadratureConfig& cfg) { return eval_g(x, cfg); },
          py::arg("x"), py::arg("config"));
    m.def("integrate_g",
          [](double lo, double hi) { return integrate_g(lo, hi); }, py::arg("lo"), py::arg("hi"));

    // Counting.
    py::class_<ForestCountTable>(m, "ForestCountTable")
        .def_static("build", &ForestCountTable::build, py::arg("max_vertices"),
                    py::arg("threads") = 1)
        .def_property_readonly("max_vertices", &ForestCountTable::max_vertices)
        .def("log_count", &ForestCountTable::log_count, py::arg("n"), py::arg("m"));
    py::class_<AcyclicProbabilityProfile>(m, "AcyclicProbabilityProfile")
        .def_static("build", &AcyclicProbabilityProfile::build, py::arg("max_vertices"),
                    py::arg("p"))
        .def_property_readonly("max_vertices", &AcyclicProbabilityProfile::max_vertices)
        .def_property_readonly("p", &AcyclicProbabilityProfile::p)
        .def("log_acyclic", &AcyclicProbabilityProfile::log_acyclic, py::arg("n"));
    m.def("acyclic_probability", &acyclic_probability, py::arg("table"), py::arg("n"),
          py::arg("p"));
    m.def("acyclic_probability_asymptotic",
          [](std::int64_t n, double p) { return acyclic_probability_asymptotic(n, p); },
          py::arg("n"), py::arg("p"));
    m.def("britikov_log_count",
          [](std::int64_t n, std::int64_t m) {
              AsymptoticCount a = britikov_log_count(n, m);
              return py::make_tuple(a.log_value, a.in_window);
          },
          py::arg("n"), py::arg("m"), "returns (log_value, in_window)");
    m.def("stack_forest_prob", &stack_forest_prob, py::arg("table"), py::arg("n"), py::arg("r"),
          py::arg("k"), py::arg("p"));
    m.def("log_separated_prob", &log_separated_prob, py::arg("profile"), py::arg("n"),
          py::arg("r"));
    m.def("expected_stack_forest_size", &expected_stack_forest_size, py::arg("profile"),
          py::arg("n"), py::arg("r"));

    // Drift calculus.
    m.def("eval_J", [](int k, double b, double lam) { return eval_J(k, b, lam); }, py::arg("k"),
          py::arg("b"), py::arg("lambda_"));
    m.def("eval_alpha", [](double b, double lam) { return eval_alpha(b, lam); }, py::arg("b"),
          py::arg("lambda_"));
    m.def("alpha_partial_b", [](double b, double lam) { return alpha_partial_b(b, lam); },
          py::arg("b"), py::arg("lambda_"));
    m.def("gamma_limits", [](double lam) {
        GammaLimits g = gamma_limits(lam);
        return py::make_tuple(g.g1, g.g3, g.g5);
    });
    py::class_<DriftEvalConfig>(m, "DriftEvalConfig").def(py::init<>());
    py::class_<AlphaTable::GridSpec>(m, "AlphaGridSpec")
        .def(py::init<>())
        .def_readwrite("b_max", &AlphaTable::GridSpec::b_max)
        .def_readwrite("b_step", &AlphaTable::GridSpec::b_step)
        .def_readwrite("lambda_min", &AlphaTable::GridSpec::lambda_min)
        .def_readwrite("lambda_max", &AlphaTable::GridSpec::lambda_max)
        .def_readwrite("lambda_step", &AlphaTable::GridSpec::lambda_step);
    py::class_<AlphaTable>(m, "AlphaTable")
        .def_static("build", &AlphaTable::build, py::arg("spec"),
                    py::arg("config") = DriftEvalConfig{}, py::arg("threads") = 1)
        .def_static("load", &AlphaTable::load, py::arg("path"))
        .def("save", &AlphaTable::save, py::arg("path"))
        .def("alpha", &AlphaTable::alpha, py::arg("b"), py::arg("lambda_"));

    // Samplers.
    py::enum_<ForestStrategy>(m, "ForestStrategy")
        .value("AUTO", ForestStrategy::Auto)
        .value("EXACT", ForestStrategy::Exact)
        .value("REJECTION", ForestStrategy::Rejection);
    m.def("sample_uniform_tree",
          [](std::int64_t k, Rng& rng) { return edges_out(sample_uniform_tree(k, rng)); },
          py::arg("k"), py::arg("rng"));
    m.def("sample_gnp",
          [](std::int64_t n, double p, Rng& rng) { return edges_out(sample_gnp(n, p, rng)); },
          py::arg("n"), py::arg("p"), py::arg("rng"));
    m.def("sample_gnm",
          [](std::int64_t n, std::int64_t mm, Rng& rng) {
              return edges_out(sample_gnm(n, mm, rng));
          },
          py::arg("n"), py::arg("m"), py::arg("rng"));
    m.def("sample_forest_nm",
          [](std::int64_t n, std::int64_t mm, Rng& rng, ForestStrategy strategy,
             const ForestCountTable* table) {
              return edges_out(sample_forest_nm(table, n, mm, rng, strategy));
          },
          py::arg("n"), py::arg("m"), py::arg("rng"),
          py::arg("strategy") = ForestStrategy::Auto, py::arg("table") = nullptr);
    m.def("sample_forest_np",
          [](std::int64_t n, double p, Rng& rng, ForestStrategy strategy,
             const ForestCountTable* table) {
              return edges_out(sample_forest_np(table, n, p, rng, strategy));
          },
          py::arg("n"), py::arg("p"), py::arg("rng"),
          py::arg("strategy") = ForestStrategy::Auto, py::arg("table") = nullptr);
    m.def("sequential_cycle_bound", &sequential_cycle_bound, py::arg("s2"), py::arg("k"),
          py::arg("n"));
    m.def("almost_monotone_triple",
          [](std::int64_t n, std::int64_t mm, Rng& rng) {
              CoupledTriple t = almost_monotone_triple(n, mm, rng);
              py::dict out;
              out["lower"] = edges_out(t.lower);
              out["middle"] = edges_out(t.middle);
              out["upper"] = edges_out(t.upper);
              out["monotone"] = t.monotone;
              return out;
          },
          py::arg("n"), py::arg("m"), py::arg("rng"));
    m.def("is_forest",
          [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
              return is_forest(forest_in(n, edges));
          },
          py::arg("n"), py::arg("edges"));
    m.def("component_sizes",
          [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
              return component_sizes(forest_in(n, edges));
          },
          py::arg("n"), py::arg("edges"));

    // Exploration.
    m.def("explore",
          [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
              ExplorationTrace tr = explore(forest_in(n, edges));
              return py::make_tuple(tr.order, tr.stack_sizes);
          },
          py::arg("n"), py::arg("edges"), "returns (order, stack_sizes)");
    m.def("excursion_lengths",
          [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
              return excursion_lengths(explore(forest_in(n, edges)));
          },
          py::arg("n"), py::arg("edges"));
    py::class_<SeparatedProbCache>(m, "SeparatedProbCache")
        .def(py::init<const AcyclicProbabilityProfile&, std::int64_t, std::int64_t, std::int64_t>(),
             py::arg("profile"), py::arg("n_lo"), py::arg("n_hi"), py::arg("j_cap"),
             py::keep_alive<1, 2>())
        .def("prefill", &SeparatedProbCache::prefill, py::arg("threads") = 1)
        .def("log_separated", &SeparatedProbCache::log_separated, py::arg("n_prime"),
             py::arg("j"));
    m.def("transition_kernel",
          [](const SeparatedProbCache& cache, std::int64_t n_total, std::int64_t n,
             std::int64_t r) {
              IncrementDistribution d = transition_kernel(cache, n_total, n, r);
              return d.probs;
          },
          py::arg("cache"), py::arg("n_total"), py::arg("n"), py::arg("r"),
          "probabilities of increment = l-1 for l = 0..len-1");
    m.def("simulate_kernel_chain", &simulate_kernel_chain, py::arg("cache"), py::arg("n_total"),
          py::arg("horizon"), py::arg("rng"));

    // Diffusion.
    m.def("simulate_Z",
          [](double lam, double horizon, double dt, Rng& rng, const AlphaTable& alpha) {
              return simulate_Z(lam, horizon, dt, rng, alpha).values;
          },
          py::arg("lambda_"), py::arg("horizon"), py::arg("dt"), py::arg("rng"),
          py::arg("alpha"));
    m.def("simulate_B",
          [](double lam, double horizon, double dt, Rng& rng) {
              return simulate_B(lam, horizon, dt, rng).values;
          },
          py::arg("lambda_"), py::arg("horizon"), py::arg("dt"), py::arg("rng"));
    m.def("diffusion_excursion_lengths",
          [](const std::vector<double>& values, double dt, double min_length) {
              DiffusionPath p;
              p.dt = dt;
              p.horizon = dt * static_cast<double>(values.size() - 1);
              p.values = values;
              return diffusion_excursions(p, min_length).lengths;
          },
          py::arg("values"), py::arg("dt"), py::arg("min_length"));

    // Statistics.
    m.def("ks_distance", &ks_distance, py::arg("a"), py::arg("b"));
    m.def("weak_majorises", &weak_majorises, py::arg("a"), py::arg("b"));
    m.def("l2_tail", &l2_tail, py::arg("sizes"), py::arg("k"));
    m.def("chisq_uniform_pvalue", &chisq_uniform_pvalue, py::arg("counts"));
}
