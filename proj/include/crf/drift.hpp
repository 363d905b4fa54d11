#ifndef CRITFOREST_DRIFT_HPP
#define CRITFOREST_DRIFT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "crf/stable_density.hpp"

namespace crf {

/// Controls for the singular integrals behind the drift correction.
/// split_point <= 0 selects the default max(b^2, 1/2) boundary between the
/// substituted near-zero regime and the direct regime.
struct DriftEvalConfig {
    QuadratureConfig quad{1e-9, 1e-11, 20000};
    double split_point = 0.0;
    double rel_tol = 1e-9;
};

/// J_k(b,l) = Int_0^inf a^{-k/2} g(l-a) exp(-b^2/(2a)) da, for odd k; the
/// weight of the stack-forest size distribution at stack height b. Near a = 0
/// the integral is taken in the substituted variable u = b^2/(2a), which
/// removes the essential singularity for k = 3, 5. Requires b > 0. `gt`
/// optionally supplies a grid-cached g.
double eval_J(int k, double b, double lambda, const DriftEvalConfig& cfg = {},
              const StableDensityTable* gt = nullptr);

/// Drift correction alpha(b,l) = J_1(b,l) / J_3(b,l); strictly positive for
/// b > 0.
double eval_alpha(double b, double lambda, const DriftEvalConfig& cfg = {},
                  const StableDensityTable* gt = nullptr);

/// d alpha / d b = b J_1 J_5 / J_3^2 - b.
double alpha_partial_b(double b, double lambda, const DriftEvalConfig& cfg = {},
                       const StableDensityTable* gt = nullptr);

/// Small-b limits: J_1 -> g1, b J_3 -> g3, b^3 J_5 -> g5 as b -> 0.
///   g1(l) = Int_0^inf a^{-1/2} g(l-a) da,
///   g3(l) = sqrt(2) g(l) Gamma(1/2),
///   g5(l) = 2 sqrt(2) g(l) Gamma(3/2).
struct GammaLimits {
    double g1;
    double g3;
    double g5;
};
GammaLimits gamma_limits(double lambda, const DriftEvalConfig& cfg = {},
                         const StableDensityTable* gt = nullptr);

/// Dense (b, lambda) grid of alpha values with bicubic interpolation, for
/// simulation hot loops. Immutable after build; concurrent reads are safe.
/// Arguments outside the grid fall back to direct quadrature. b = 0 maps to
/// alpha = 0 (the continuous extension).
class AlphaTable {
public:
    struct GridSpec {
        double b_max = 8.0;
        double b_step = 0.02;
        double lambda_min = -12.0;
        double lambda_max = 6.0;
        double lambda_step = 0.05;
    };

    static AlphaTable build(const GridSpec& spec, const DriftEvalConfig& cfg = {},
                            int threads = 1);
    static AlphaTable build_default(int threads = 1) { return build(GridSpec{}, {}, threads); }

    double alpha(double b, double lambda) const;

    const GridSpec& spec() const { return spec_; }

    /// Versioned binary round-trip (magic bytes, grid spec, payload checksum).
    void save(const std::string& path) const;
    static AlphaTable load(const std::string& path);

private:
    AlphaTable() = default;
    double node(std::size_t bi, std::size_t li) const { return values_[li * nb_ + bi]; }

    GridSpec spec_;
    std::size_t nb_ = 0, nl_ = 0;
    std::vector<double> values_;
    DriftEvalConfig cfg_;
    std::shared_ptr<const StableDensityTable> gtable_;
};

/// Shared g-table covering every argument the drift integrals touch for
/// lambda in [-13, 7]; built once and reused across J evaluations.
std::shared_ptr<const StableDensityTable> make_drift_gtable();

} // namespace crf

#endif
