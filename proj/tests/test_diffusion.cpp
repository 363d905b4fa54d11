#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crf/analysis.hpp"
#include "crf/diffusion.hpp"
#include "crf/errors.hpp"
#include "verify/oracles.hpp"

using namespace crf;

namespace {

// One shared table for the whole suite; coarser than the production grid but
// comfortably inside the behavioural tolerances used here.
const AlphaTable& test_table() {
    static AlphaTable table = [] {
        AlphaTable::GridSpec spec;
        spec.b_max = 4.0;
        spec.b_step = 0.04;
        spec.lambda_min = -15.5;
        spec.lambda_max = 1.5;
        spec.lambda_step = 0.1;
        return AlphaTable::build(spec, {}, 2);
    }();
    return table;
}

} // namespace

TEST_CASE("drift field basics") {
    const AlphaTable& at = test_table();
    CHECK(drift_field(0.7, 0.0, 0.3, at) == doctest::Approx(0.3 - 0.7));
    // Never exceeds lambda - t, and decreases in z.
    double prev = 1e300;
    for (double z : {0.0, 0.5, 1.0, 2.0, 3.5}) {
        double d = drift_field(0.2, z, 0.0, at);
        CHECK(d <= 0.0 - 0.2 + 1e-12);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
}

TEST_CASE("replay determinism and non-negativity") {
    const AlphaTable& at = test_table();
    Rng a(303), b(303);
    DiffusionPath p1 = simulate_Z(0.0, 3.0, 1e-3, a, at);
    DiffusionPath p2 = simulate_Z(0.0, 3.0, 1e-3, b, at);
    CHECK(p1.values == p2.values);
    CHECK(p1.values.front() == 0.0);
    for (double v : p1.values) CHECK(v >= 0.0);
    Rng c(304);
    DiffusionPath pb = simulate_B(0.0, 3.0, 1e-3, c);
    for (double v : pb.values) CHECK(v >= 0.0);
}

TEST_CASE("strongly negative drift pins the path at zero") {
    // The set of exact zeros has measure zero in the continuum, so its grid
    // fraction is dt-dependent (~0.45 at dt=1e-3); the pinning statement is
    // about occupation near zero. A reflected walk with drift -10 has
    // stationary mean height 1/20, so more than half the time sits below 0.05.
    const AlphaTable& at = test_table();
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = Rng::child(305, static_cast<std::uint64_t>(rep));
        DiffusionPath p = simulate_Z(-10.0, 5.0, 1e-3, rng, at);
        std::int64_t zeros = 0, low = 0;
        for (double v : p.values) {
            if (v == 0.0) ++zeros;
            if (v <= 0.05) ++low;
        }
        double zero_frac = static_cast<double>(zeros) / static_cast<double>(p.values.size());
        double low_frac = static_cast<double>(low) / static_cast<double>(p.values.size());
        CAPTURE(rep);
        CHECK(low_frac > 0.5);
        CHECK(zero_frac > 0.25); // the reflection clip genuinely fires
    }
}

TEST_CASE("coupled paths: domination at every grid point") {
    const AlphaTable& at = test_table();
    for (double lambda : {-2.0, 0.0, 1.0}) {
        for (int rep = 0; rep < 7; ++rep) {
            Rng rng = Rng::child(306, static_cast<std::uint64_t>(rep) * 17 +
                                          static_cast<std::uint64_t>(lambda + 3));
            auto [z, b] = coupled_ZB(lambda, 4.0, 1e-3, rng, at);
            bool ok = true;
            for (std::size_t i = 0; i < z.values.size(); ++i)
                ok = ok && z.values[i] <= b.values[i] + 1e-12;
            CHECK(ok);
        }
    }
    // Shared-seed determinism of the pair.
    Rng r1(307), r2(307);
    auto pair1 = coupled_ZB(0.5, 1.0, 1e-3, r1, at);
    auto pair2 = coupled_ZB(0.5, 1.0, 1e-3, r2, at);
    CHECK(pair1.first.values == pair2.first.values);
    CHECK(pair1.second.values == pair2.second.values);
}

TEST_CASE("coupled paths nearly coincide while small") {
    const AlphaTable& at = test_table();
    for (int rep = 0; rep < 10; ++rep) {
        Rng rng = Rng::child(308, static_cast<std::uint64_t>(rep));
        auto [z, b] = coupled_ZB(0.0, 0.01, 1e-4, rng, at);
        for (std::size_t i = 0; i < z.values.size(); ++i)
            CHECK(std::fabs(z.values[i] - b.values[i]) <= 0.05);
    }
}

TEST_CASE("excursion extraction") {
    DiffusionPath p;
    p.lambda = 0.0;
    p.dt = 0.1;
    p.horizon = 1.0;
    p.values = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK(diffusion_excursions(p, 0.2).intervals.empty());
    CHECK_THROWS_AS(diffusion_excursions(p, 0.05), DomainError);

    // Single bump with exact endpoints.
    p.values = {0, 0, 1, 2, 1, 0, 0, 0, 0, 0, 0};
    ExcursionSet ex = diffusion_excursions(p, 0.2);
    REQUIRE(ex.intervals.size() == 1);
    CHECK(ex.intervals[0].first == doctest::Approx(0.1));
    CHECK(ex.intervals[0].second == doctest::Approx(0.5));
    CHECK(ex.lengths[0] == doctest::Approx(0.4));

    // Truncated at the horizon; total excursion measure bounded by it.
    p.values = {0, 1, 0, 2, 1, 2, 0, 0, 1, 2, 3};
    ExcursionSet ex2 = diffusion_excursions(p, 0.1000001);
    double total = 0.0;
    for (double l : ex2.lengths) total += l;
    CHECK(total <= 1.0 + 1e-12);
    CHECK(ex2.intervals.back().second == doctest::Approx(1.0));
    // Lengths are sorted non-increasing.
    for (std::size_t i = 1; i < ex2.lengths.size(); ++i)
        CHECK(ex2.lengths[i] <= ex2.lengths[i - 1]);
}

TEST_CASE("uncorrected diffusion: largest excursion is well behaved") {
    double total = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng = Rng::child(309, static_cast<std::uint64_t>(rep));
        DiffusionPath p = simulate_B(0.0, 10.0, 1e-3, rng);
        ExcursionSet ex = diffusion_excursions(p, 2e-3);
        REQUIRE(!ex.lengths.empty());
        CHECK(std::isfinite(ex.lengths[0]));
        total += ex.lengths[0];
    }
    CHECK(total / 200.0 > 0.1);
}

TEST_CASE("time-step refinement stability of the largest excursion") {
    // Both resolutions are driven by one Brownian path (each coarse increment
    // is the sum of four fine ones), so the KS distance reads the
    // discretization effect rather than independent sampling noise.
    const AlphaTable& at = test_table();
    const int reps = 2000;
    const double dt_f = 2.5e-4;
    const std::size_t steps_f = 20000;
    std::vector<double> coarse, fine;
    coarse.reserve(reps);
    fine.reserve(reps);
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng = Rng::child(310, static_cast<std::uint64_t>(rep));
        DiffusionPath pf, pc;
        pf.lambda = pc.lambda = 0.0;
        pf.dt = dt_f;
        pc.dt = 4.0 * dt_f;
        pf.horizon = pc.horizon = 5.0;
        pf.values.assign(steps_f + 1, 0.0);
        pc.values.assign(steps_f / 4 + 1, 0.0);
        double zf = 0.0, zc = 0.0;
        double sq_f = std::sqrt(dt_f);
        double bank = 0.0; // accumulated fine noise for the current coarse step
        for (std::size_t i = 0; i < steps_f; ++i) {
            double xi = sq_f * rng.normal();
            double tf = dt_f * static_cast<double>(i);
            zf = std::max(0.0, zf + (0.0 - tf - at.alpha(zf, -tf)) * dt_f + xi);
            pf.values[i + 1] = zf;
            bank += xi;
            if ((i + 1) % 4 == 0) {
                double tc = pc.dt * static_cast<double>(i / 4);
                zc = std::max(0.0, zc + (0.0 - tc - at.alpha(zc, -tc)) * pc.dt + bank);
                pc.values[i / 4 + 1] = zc;
                bank = 0.0;
            }
        }
        ExcursionSet exf = diffusion_excursions(pf, 2.0 * dt_f);
        ExcursionSet exc = diffusion_excursions(pc, 2.0 * pc.dt);
        fine.push_back(exf.lengths.empty() ? 0.0 : exf.lengths[0]);
        coarse.push_back(exc.lengths.empty() ? 0.0 : exc.lengths[0]);
    }
    CHECK(ks_distance(coarse, fine) <= 0.03);
}

TEST_CASE("size-biased appearance of long excursions") {
    const AlphaTable& at = test_table();
    std::int64_t wins = 0, pairs = 0;
    for (int rep = 0; rep < 5000; ++rep) {
        Rng rng = Rng::child(312, static_cast<std::uint64_t>(rep));
        DiffusionPath p = simulate_Z(0.0, 5.0, 1e-3, rng, at);
        ExcursionSet ex = diffusion_excursions(p, 0.05);
        // First two completed excursions longer than 0.05, in time order.
        std::vector<double> ordered;
        for (const auto& iv : ex.intervals) {
            if (iv.second >= p.horizon) continue;
            ordered.push_back(iv.second - iv.first);
            if (ordered.size() == 2) break;
        }
        if (ordered.size() == 2) {
            ++pairs;
            if (ordered[0] > ordered[1]) ++wins;
        }
    }
    REQUIRE(pairs > 1000);
    double freq = static_cast<double>(wins) / static_cast<double>(pairs);
    double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(pairs));
    CAPTURE(freq);
    CHECK(freq - 3.0 * se > 0.5);
}

TEST_CASE("conditioned excursions look like Brownian excursions") {
    const AlphaTable& at = test_table();
    std::vector<double> maxima;
    for (int rep = 0; rep < 16000 && maxima.size() < 1000; ++rep) {
        Rng rng = Rng::child(313, static_cast<std::uint64_t>(rep));
        DiffusionPath p = simulate_Z(0.0, 10.0, 1e-3, rng, at);
        ExcursionSet ex = diffusion_excursions(p, 2e-3);
        for (const auto& iv : ex.intervals) {
            double len = iv.second - iv.first;
            if (len < 0.9 || len > 1.1 || iv.second >= p.horizon) continue;
            std::size_t lo = static_cast<std::size_t>(std::llround(iv.first / p.dt));
            std::size_t hi = static_cast<std::size_t>(std::llround(iv.second / p.dt));
            double peak = 0.0;
            for (std::size_t i = lo; i <= hi && i < p.values.size(); ++i)
                peak = std::max(peak, p.values[i]);
            maxima.push_back(peak / std::sqrt(len)); // Brownian rescaling to [0,1]
            if (maxima.size() >= 1000) break;
        }
    }
    REQUIRE(maxima.size() == 1000);
    std::vector<double> oracle_maxima;
    Rng orng(314);
    for (int i = 0; i < 1000; ++i)
        oracle_maxima.push_back(oracle::sample_brownian_excursion_max(1000, orng));
    CHECK(ks_distance(maxima, oracle_maxima) <= 0.08);
}
