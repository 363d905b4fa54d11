#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crf/errors.hpp"
#include "crf/stable_density.hpp"

using namespace crf;

// Golden value for g(0), frozen from two independent schemes (quarter-period
// panels vs double-exponential rule in the substituted variable) agreeing to
// 1e-9; see tests/fixtures/golden.json and tools/gen_goldens.
static constexpr double kG0 = 0.25881940379287;

TEST_CASE("g(0) golden value from dual schemes") {
    double panel = eval_g(0.0);
    double de = eval_g_de_scheme(0.0);
    CHECK(std::fabs(panel - de) < 1e-9);
    CHECK(panel == doctest::Approx(kG0).epsilon(1e-10));
}

TEST_CASE("normalization: g integrates to 1") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-9;
    // The density is totally skewed: the right tail is ~ x^{-5/2}/sqrt(2 pi),
    // so mass beyond 1500 is below 1e-5, while the left tail beyond -25 is
    // negligible at double precision.
    double mass = integrate_g(-25.0, 1500.0, cfg);
    CHECK(std::fabs(mass - 1.0) < 1e-4);
}

TEST_CASE("interval additivity of integrate_g") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-9;
    double ab = integrate_g(-2.0, 1.0, cfg);
    double bc = integrate_g(1.0, 4.0, cfg);
    double ac = integrate_g(-2.0, 4.0, cfg);
    CHECK(std::fabs(ab + bc - ac) < 2e-8);
    CHECK(integrate_g(0.7, 0.7, cfg) == 0.0);
}

TEST_CASE("decay at both infinities") {
    // Left tail falls like exp(-|x|^3/6): far below noise already at -20.
    CHECK(std::fabs(eval_g(-20.0)) < 1e-12);
    CHECK(std::fabs(eval_g(-50.0)) < 1e-12);
    // Right tail is the heavy one, ~ sqrt(2/pi) x^{-5/2}.
    CHECK(eval_g(50.0) < 1e-4);
    CHECK(eval_g(320.0) < 1e-6);
    double c = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
    for (double x : {50.0, 100.0, 200.0}) {
        CHECK(eval_g(x) * std::pow(x, 2.5) == doctest::Approx(c).epsilon(2e-3));
    }
}

TEST_CASE("positivity on the grid") {
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.5) {
        CAPTURE(x);
        CHECK(eval_g(x) > 0.0);
    }
}

TEST_CASE("left-tail route agrees with the oscillatory route near the seam") {
    for (double x : {-5.0, -4.8, -4.5, -4.2}) {
        CAPTURE(x);
        // Oscillatory values here are ~1e-7..1e-9, far above its noise floor.
        CHECK(eval_g_airy_tail(x) == doctest::Approx(eval_g(x)).epsilon(1e-6));
    }
    // Deep tail stays positive and decays monotonically.
    double prev = eval_g(-6.0);
    for (double x = -6.5; x >= -14.0 - 1e-9; x -= 0.5) {
        CAPTURE(x);
        double v = eval_g(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("uniform continuity proxy on the grid") {
    const double h = 1e-3;
    const double L = 0.5; // empirical bound on |g'|
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.5) {
        CAPTURE(x);
        CHECK(std::fabs(eval_g(x + h) - eval_g(x)) <= L * h);
    }
}

TEST_CASE("halving the tolerance moves the value by less than the old tolerance") {
    QuadratureConfig loose;
    loose.abs_tol = 1e-8;
    loose.truncation_tail = 1e-10;
    QuadratureConfig tight;
    tight.abs_tol = 5e-9;
    tight.truncation_tail = 5e-11;
    for (double x : {-4.0, -1.0, 0.0, 2.0, 7.0}) {
        CAPTURE(x);
        CHECK(std::fabs(eval_g(x, loose) - eval_g(x, tight)) < loose.abs_tol);
    }
}

TEST_CASE("grid cache table matches direct evaluation") {
    StableDensityTable table(-10.0, 10.0, 5e-3);
    for (double x = -9.5; x <= 9.5; x += 0.377) {
        CAPTURE(x);
        CHECK(table(x) == doctest::Approx(eval_g(x)).epsilon(1e-9));
    }
    // Out-of-range arguments fall back to direct evaluation.
    CHECK(table(12.0) == doctest::Approx(eval_g(12.0)).epsilon(1e-12));
}

TEST_CASE("config invariants and errors") {
    CHECK_THROWS_AS(integrate_g(2.0, 1.0), DomainError);
    QuadratureConfig starved;
    starved.max_subdivisions = 3;
    CHECK_THROWS_AS(eval_g(0.0, starved), AccuracyError);
    try {
        eval_g(0.0, starved);
    } catch (const AccuracyError& e) {
        CHECK(e.achieved_bound > 0.0);
    }
}
