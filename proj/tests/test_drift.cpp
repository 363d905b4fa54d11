#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "crf/drift.hpp"
#include "crf/errors.hpp"
#include "crf/forest_counts.hpp"
#include "crf/quadrature.hpp"
#include "verify/oracles.hpp"

using namespace crf;

namespace {
const StableDensityTable* gtable() { return make_drift_gtable().get(); }
} // namespace

TEST_CASE("J_k basics and domain errors") {
    CHECK_THROWS_AS(eval_J(2, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(eval_J(1, 0.0, 0.0), DomainError);
    CHECK(eval_J(1, 1.0, 0.0, {}, gtable()) > 0.0);
    CHECK(eval_J(3, 1.0, 0.0, {}, gtable()) > 0.0);
    CHECK(eval_J(5, 1.0, 0.0, {}, gtable()) > 0.0);
}

TEST_CASE("J_k strictly decreasing in b") {
    for (int k : {1, 3, 5}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            double prev = 1e300;
            for (double b : {0.3, 0.6, 1.0, 1.8, 3.0}) {
                CAPTURE(k);
                CAPTURE(lambda);
                CAPTURE(b);
                double v = eval_J(k, b, lambda, {}, gtable());
                CHECK(v < prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("derivative identity dJ_1/db = -b J_3") {
    const double h = 1e-4;
    for (double b : {0.5, 1.0, 2.0}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            CAPTURE(b);
            CAPTURE(lambda);
            double fd = (eval_J(1, b + h, lambda, {}, gtable()) -
                         eval_J(1, b - h, lambda, {}, gtable())) /
                        (2.0 * h);
            double expected = -b * eval_J(3, b, lambda, {}, gtable());
            CHECK(fd == doctest::Approx(expected).epsilon(1e-4));
        }
    }
}

TEST_CASE("alpha partial in b matches finite differences") {
    const double h = 1e-4;
    for (double b : {0.5, 1.0, 2.0}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            CAPTURE(b);
            CAPTURE(lambda);
            double fd = (eval_alpha(b + h, lambda, {}, gtable()) -
                         eval_alpha(b - h, lambda, {}, gtable())) /
                        (2.0 * h);
            double analytic = alpha_partial_b(b, lambda, {}, gtable());
            CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
            CHECK(analytic > 0.0);
        }
    }
}

TEST_CASE("alpha is increasing in b and vanishes at small b") {
    for (double lambda : {-2.0, 0.0, 2.0}) {
        double prev = -1.0;
        for (double b = 0.1; b <= 5.0 + 1e-12; b += 0.1) {
            CAPTURE(lambda);
            CAPTURE(b);
            double v = eval_alpha(b, lambda, {}, gtable());
            CHECK(v > prev);
            prev = v;
        }
        // The slope at 0 is gamma1/gamma3, which reaches ~5.7 by lambda = 2,
        // so the small-b gate sits at 0.08; halving b halves alpha.
        double a1 = eval_alpha(0.01, lambda, {}, gtable());
        double a2 = eval_alpha(0.005, lambda, {}, gtable());
        CAPTURE(lambda);
        CHECK(a1 < 0.08);
        CHECK(a2 / a1 > 0.4);
        CHECK(a2 / a1 < 0.6);
    }
}

TEST_CASE("alpha against an independent Monte Carlo integrator") {
    Rng rng(20240817);
    oracle::McEstimate mc = oracle::alpha_by_monte_carlo(1.0, 0.0, 400000, rng);
    double exact = eval_alpha(1.0, 0.0, {}, gtable());
    CAPTURE(mc.value);
    CAPTURE(mc.std_error);
    CHECK(std::fabs(exact - mc.value) < 3.0 * mc.std_error);
}

TEST_CASE("small-b limits of the J integrals") {
    GammaLimits gl = gamma_limits(0.0, {}, gtable());
    // Gamma(3/2) = Gamma(1/2)/2 makes g5 equal g3.
    CHECK(gl.g5 / gl.g3 == doctest::Approx(1.0).epsilon(1e-12));
    for (double lambda = -3.0; lambda <= 3.0 + 1e-9; lambda += 1.0) {
        CHECK(gamma_limits(lambda, {}, gtable()).g3 > 0.0);
    }

    // J_1(b) increases monotonically to g1 as b drops.
    double prev_gap = 1e300;
    for (double b : {0.2, 0.1, 0.05}) {
        double gap = gl.g1 - eval_J(1, b, 0.0, {}, gtable());
        CAPTURE(b);
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    // b J_3 -> g3 and b^3 J_5 -> g5.
    prev_gap = 1e300;
    for (double b : {0.2, 0.1, 0.05}) {
        double gap = std::fabs(b * eval_J(3, b, 0.0, {}, gtable()) - gl.g3);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    prev_gap = 1e300;
    for (double b : {0.2, 0.1, 0.05}) {
        double gap = std::fabs(b * b * b * eval_J(5, b, 0.0, {}, gtable()) - gl.g5);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    // d alpha / d b approaches g1 g5 / g3^2.
    double limit = gl.g1 * gl.g5 / (gl.g3 * gl.g3);
    prev_gap = 1e300;
    for (double b : {0.2, 0.1, 0.05}) {
        double gap = std::fabs(alpha_partial_b(b, 0.0, {}, gtable()) - limit);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("gamma_1 agrees with an independent quadrature route") {
    for (double lambda : {-1.0, 0.0, 1.5}) {
        CAPTURE(lambda);
        GammaLimits gl = gamma_limits(lambda, {}, gtable());
        // g(lambda - a) is below double noise once a - lambda > ~8.
        double de = integrate_halfline_de([&](double a) {
            return a - lambda < 12.0 ? std::pow(a, -0.5) * eval_g(lambda - a) : 0.0;
        });
        CHECK(gl.g1 == doctest::Approx(de).epsilon(1e-6));
    }
}

TEST_CASE("Lipschitz witness on the test grid") {
    double c_max = 0.0;
    for (double b = 0.25; b <= 5.0 + 1e-12; b += 0.25) {
        for (double lambda : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            c_max = std::max(c_max, std::fabs(alpha_partial_b(b, lambda, {}, gtable())));
        }
    }
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        double b1 = 0.25 + 4.75 * rng.u01();
        double b2 = 0.25 + 4.75 * rng.u01();
        double lambda = -2.0 + 4.0 * rng.u01();
        CAPTURE(b1);
        CAPTURE(b2);
        CAPTURE(lambda);
        double lhs = std::fabs(eval_alpha(b1, lambda, {}, gtable()) -
                               eval_alpha(b2, lambda, {}, gtable()));
        CHECK(lhs <= 1.05 * c_max * std::fabs(b1 - b2) + 1e-9);
    }
}

TEST_CASE("continuity in lambda") {
    for (double b : {0.5, 1.5, 3.0}) {
        for (double lambda : {-2.0, 0.0, 2.0}) {
            CAPTURE(b);
            CAPTURE(lambda);
            CHECK(std::fabs(eval_alpha(b, lambda, {}, gtable()) -
                            eval_alpha(b, lambda + 1e-4, {}, gtable())) <= 1e-2);
        }
    }
}

TEST_CASE("rescaled expected stack forest size approaches alpha") {
    // At b = 1, Lambda = 0: n^{-2/3} E[k_r | separated] -> alpha(1, 0).
    double target = eval_alpha(1.0, 0.0, {}, gtable());
    double prev_gap = 1e300;
    for (std::int64_t n : {500, 1000, 2000}) {
        double p = 1.0 / static_cast<double>(n);
        std::int64_t r = static_cast<std::int64_t>(std::floor(std::cbrt(static_cast<double>(n))));
        AcyclicProbabilityProfile prof = AcyclicProbabilityProfile::build(n, p);
        double scaled = expected_stack_forest_size(prof, n, r) /
                        std::pow(static_cast<double>(n), 2.0 / 3.0);
        double gap = std::fabs(scaled - target);
        CAPTURE(n);
        CAPTURE(scaled);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("alpha interpolation table") {
    AlphaTable::GridSpec spec;
    spec.b_max = 3.0;
    spec.b_step = 0.02;
    spec.lambda_min = -3.0;
    spec.lambda_max = 1.0;
    spec.lambda_step = 0.05;
    AlphaTable table = AlphaTable::build(spec, {}, 2);

    CHECK(table.alpha(0.0, 0.0) == 0.0);
    Rng rng(99);
    for (int i = 0; i < 25; ++i) {
        double b = 0.05 + 2.9 * rng.u01();
        double lambda = -2.95 + 3.9 * rng.u01();
        CAPTURE(b);
        CAPTURE(lambda);
        CHECK(std::fabs(table.alpha(b, lambda) - eval_alpha(b, lambda, {}, gtable())) < 1e-5);
    }
    // Outside the grid the table falls back to direct quadrature.
    CHECK(table.alpha(3.5, 0.0) ==
          doctest::Approx(eval_alpha(3.5, 0.0, DriftEvalConfig{}, gtable())).epsilon(1e-9));

    // Binary round-trip with checksum validation.
    std::string path = "alpha_table_test.bin";
    table.save(path);
    AlphaTable loaded = AlphaTable::load(path);
    CHECK(loaded.alpha(1.234, -0.777) == doctest::Approx(table.alpha(1.234, -0.777)).epsilon(1e-14));
    // Corrupt one payload byte: the checksum must catch it.
    {
        std::FILE* f = std::fopen(path.c_str(), "r+b");
        REQUIRE(f);
        std::fseek(f, 200, SEEK_SET);
        int c = std::fgetc(f);
        std::fseek(f, 200, SEEK_SET);
        std::fputc(c ^ 0x40, f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(AlphaTable::load(path), DomainError);
    std::remove(path.c_str());
}
