#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crf/errors.hpp"
#include "crf/forest_counts.hpp"
#include "verify/oracles.hpp"

using namespace crf;

TEST_CASE("log_count matches exhaustive enumeration for all n <= 6") {
    ForestCountTable table = ForestCountTable::build(6);
    for (std::int64_t n = 1; n <= 6; ++n) {
        for (std::int64_t m = 0; m <= n - 1; ++m) {
            CAPTURE(n);
            CAPTURE(m);
            std::int64_t exact = oracle::forest_count_by_enumeration(n, m);
            std::int64_t rounded =
                static_cast<std::int64_t>(std::llround(std::exp(table.log_count(n, m))));
            CHECK(rounded == exact);
        }
    }
}

TEST_CASE("tree counts: exp(log_count(n, n-1)) = n^{n-2}") {
    ForestCountTable table = ForestCountTable::build(12);
    CHECK(std::exp(table.log_count(3, 2)) == doctest::Approx(3.0).epsilon(1e-12));
    for (std::int64_t n = 2; n <= 12; ++n) {
        CAPTURE(n);
        double expected = static_cast<double>(n - 2) * std::log(static_cast<double>(n));
        CHECK(table.log_count(n, n - 1) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("m = 0 always counts exactly one forest") {
    ForestCountTable table = ForestCountTable::build(40);
    for (std::int64_t n : {1, 7, 25, 40}) CHECK(table.log_count(n, 0) == 0.0);
}

TEST_CASE("table bounds and errors") {
    ForestCountTable table = ForestCountTable::build(10);
    CHECK_THROWS_AS(table.log_count(5, 5), DomainError);
    CHECK_THROWS_AS(table.log_count(3, -1), DomainError);
    CHECK_THROWS_AS(table.log_count(11, 3), CapacityError);
}

TEST_CASE("acyclic probability: exact small cases") {
    ForestCountTable table = ForestCountTable::build(8);
    CHECK(acyclic_probability(table, 2, 0.37) == doctest::Approx(1.0));
    // On three vertices the only cycle is the triangle.
    CHECK(acyclic_probability(table, 3, 0.5) == doctest::Approx(1.0 - 0.125).epsilon(1e-13));
    for (double p : {0.1, 0.3, 0.5}) {
        for (std::int64_t n : {4, 5, 6}) {
            CAPTURE(n);
            CAPTURE(p);
            CHECK(acyclic_probability(table, n, p) ==
                  doctest::Approx(oracle::acyclic_prob_by_enumeration(n, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("acyclic probability decreases in p") {
    ForestCountTable table = ForestCountTable::build(30);
    double prev = 1.0;
    for (double p : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7}) {
        double cur = acyclic_probability(table, 30, p);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("weighted-sum profile agrees with the table route") {
    ForestCountTable table = ForestCountTable::build(120);
    for (double p : {0.003, 0.008, 1.0 / 120.0}) {
        AcyclicProbabilityProfile prof = AcyclicProbabilityProfile::build(120, p);
        for (std::int64_t n : {2, 17, 60, 119, 120}) {
            CAPTURE(n);
            CAPTURE(p);
            CHECK(prof.log_acyclic(n) ==
                  doctest::Approx(log_acyclic_probability(table, n, p)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(AcyclicProbabilityProfile::build(50, 0.1).log_acyclic(51), CapacityError);
}

TEST_CASE("stack forest event probability matches enumeration at n = 5") {
    ForestCountTable table = ForestCountTable::build(5);
    for (double p : {0.1, 0.3, 0.5}) {
        for (std::int64_t r = 1; r <= 3; ++r) {
            for (std::int64_t k = r; k <= 5; ++k) {
                CAPTURE(p);
                CAPTURE(r);
                CAPTURE(k);
                double expected = oracle::stack_forest_prob_by_enumeration(5, r, k, p);
                double got = stack_forest_prob(table, 5, r, k, p);
                CHECK(std::fabs(got - expected) < 1e-12);
            }
        }
    }
}

TEST_CASE("r = k = 1 specializes to an isolated first vertex") {
    ForestCountTable table = ForestCountTable::build(9);
    for (std::int64_t n : {3, 6, 9}) {
        for (double p : {0.15, 0.4}) {
            CAPTURE(n);
            CAPTURE(p);
            double direct = std::pow(1.0 - p, static_cast<double>(n - 1)) *
                            acyclic_probability(table, n - 1, p);
            CHECK(stack_forest_prob(table, n, 1, 1, p) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("separated probability is the k-sum and matches enumeration") {
    AcyclicProbabilityProfile prof = AcyclicProbabilityProfile::build(5, 0.3);
    for (std::int64_t r = 0; r <= 5; ++r) {
        CAPTURE(r);
        double expected = oracle::separated_prob_by_enumeration(5, r, 0.3);
        CHECK(std::exp(log_separated_prob(prof, 5, r)) == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("expected stack forest size: boundary and enumeration") {
    // r = n forces the stack forest to cover everything.
    AcyclicProbabilityProfile prof6 = AcyclicProbabilityProfile::build(6, 0.2);
    CHECK(expected_stack_forest_size(prof6, 6, 6) == doctest::Approx(6.0));
    // r = 1: expected component size of the first vertex given acyclic.
    AcyclicProbabilityProfile prof5 = AcyclicProbabilityProfile::build(5, 0.3);
    double expected = oracle::expected_component_of_first_by_enumeration(5, 0.3);
    CHECK(expected_stack_forest_size(prof5, 5, 1) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("britikov estimate carries the window flag") {
    AsymptoticCount inside = britikov_log_count(200, 100);
    CHECK(inside.in_window);
    AsymptoticCount outside = britikov_log_count(200, 180);
    CHECK_FALSE(outside.in_window);
    CHECK(std::isfinite(outside.log_value));
    CHECK_THROWS_AS(britikov_log_count(10, 10), DomainError);
}

TEST_CASE("britikov ratio approaches 1 as n grows") {
    ForestCountTable table = ForestCountTable::build(800, 2);
    double prev = 1e9;
    for (std::int64_t n : {200, 400, 800}) {
        std::int64_t m = n / 2;
        double ratio = std::exp(table.log_count(n, m) - britikov_log_count(n, m).log_value);
        CAPTURE(n);
        double gap = std::fabs(ratio - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.1);
}

TEST_CASE("window asymptotic for the acyclic probability") {
    // Homogeneity: at fixed Lambda the value scales like n^{-1/6}.
    double lo = acyclic_probability_asymptotic(1000, 1.0 / 1000.0);
    double hi = acyclic_probability_asymptotic(64000, 1.0 / 64000.0);
    CHECK(hi / lo == doctest::Approx(0.5).epsilon(1e-9));
    // Against the exact sum at moderate n.
    ForestCountTable table = ForestCountTable::build(2000, 2);
    double exact = acyclic_probability(table, 2000, 1.0 / 2000.0);
    double asym = acyclic_probability_asymptotic(2000, 1.0 / 2000.0);
    CHECK(std::fabs(asym / exact - 1.0) < 0.1);
    // Ordered in g: larger density value gives a larger probability.
    double g_up = acyclic_probability_asymptotic(5000, 1.0 / 5000.0 - 1.5 / std::pow(5000.0, 4.0 / 3.0));
    double g_dn = acyclic_probability_asymptotic(5000, 1.0 / 5000.0 + 4.0 / std::pow(5000.0, 4.0 / 3.0));
    CHECK(eval_g(-1.5) > eval_g(4.0));
    CHECK(g_up > g_dn);
}

TEST_CASE("stack forest asymptotic: shift invariance and limits") {
    ScalingParams sp;
    sp.n_total = 3000;
    sp.n_remaining = 3000;
    sp.stack_size = static_cast<std::int64_t>(std::floor(std::cbrt(3000.0)));
    sp.stack_forest_size = static_cast<std::int64_t>(std::pow(3000.0, 2.0 / 3.0));
    sp.p = 1.0 / 3000.0;
    CHECK_THROWS_AS(
        [] {
            ScalingParams bad;
            bad.n_total = 100;
            bad.n_remaining = 100;
            bad.stack_size = 0;
            bad.stack_forest_size = 0;
            bad.p = 0.01;
            return stack_forest_prob_asymptotic(bad);
        }(),
        DomainError);

    // Every factor reads Lambda and s only through Lambda - s, so shifting
    // both by the same c leaves the value unchanged. Pick the shift so that
    // s lands exactly on the rescaling of an integer vertex deficit.
    std::int64_t deficit = 150;
    double c = static_cast<double>(deficit) / std::pow(3000.0, 2.0 / 3.0);
    ScalingParams shifted = sp;
    shifted.n_remaining = 3000 - deficit;
    shifted.p = sp.p + c / std::pow(3000.0, 4.0 / 3.0); // Lambda += c
    CHECK(shifted.lambda_window() - shifted.s() ==
          doctest::Approx(sp.lambda_window() - sp.s()).epsilon(1e-10));
    CHECK(stack_forest_prob_asymptotic(shifted) ==
          doctest::Approx(stack_forest_prob_asymptotic(sp)).epsilon(1e-8));

    // Vanishes as the stack-forest size shrinks at fixed positive b.
    ScalingParams tiny = sp;
    tiny.stack_forest_size = 40; // a ~ 0.19
    ScalingParams tinier = sp;
    tinier.stack_forest_size = 10; // a ~ 0.05
    CHECK(stack_forest_prob_asymptotic(tinier) < stack_forest_prob_asymptotic(tiny));
}

TEST_CASE("exact-vs-asymptotic for the stack forest event at n = 3000") {
    const std::int64_t n = 3000;
    const double p = 1.0 / static_cast<double>(n);
    AcyclicProbabilityProfile prof = AcyclicProbabilityProfile::build(n, p);
    ScalingParams sp;
    sp.n_total = n;
    sp.n_remaining = n;
    sp.p = p;
    sp.stack_size = static_cast<std::int64_t>(std::floor(std::cbrt(static_cast<double>(n))));
    sp.stack_forest_size = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 2.0 / 3.0));
    double exact = std::exp(log_stack_forest_prob(prof, n, sp.stack_size, sp.stack_forest_size));
    double asym = stack_forest_prob_asymptotic(sp);
    CHECK(std::fabs(exact / asym - 1.0) < 0.2);
}

TEST_CASE("sum of f(n,m) weights stays a probability") {
    ForestCountTable table = ForestCountTable::build(64);
    for (double p : {0.01, 0.05, 0.2}) {
        for (std::int64_t n : {8, 32, 64}) {
            double v = acyclic_probability(table, n, p);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}
