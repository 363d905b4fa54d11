// Regenerates tests/fixtures/golden.json: reference values frozen into the
// test suite, each computed by two unrelated numerical routes.

#include <cstdio>

#include "crf/drift.hpp"
#include "crf/stable_density.hpp"

int main() {
    using namespace crf;
    double g0_panels = eval_g(0.0);
    double g0_de = eval_g_de_scheme(0.0);
    const StableDensityTable* gt = make_drift_gtable().get();
    GammaLimits gl = gamma_limits(0.0, {}, gt);
    double alpha_1_0 = eval_alpha(1.0, 0.0, {}, gt);
    std::printf("{\n");
    std::printf("  \"g0_panel_scheme\": %.15e,\n", g0_panels);
    std::printf("  \"g0_de_scheme\": %.15e,\n", g0_de);
    std::printf("  \"g0_scheme_gap\": %.3e,\n", g0_panels - g0_de);
    std::printf("  \"gamma1_at_0\": %.15e,\n", gl.g1);
    std::printf("  \"gamma3_at_0\": %.15e,\n", gl.g3);
    std::printf("  \"gamma5_at_0\": %.15e,\n", gl.g5);
    std::printf("  \"alpha_b1_lambda0\": %.15e\n", alpha_1_0);
    std::printf("}\n");
    return 0;
}
