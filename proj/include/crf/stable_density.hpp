#ifndef CRITFOREST_STABLE_DENSITY_HPP
#define CRITFOREST_STABLE_DENSITY_HPP

#include <cstddef>
#include <vector>

namespace crf {

/// Controls for the oscillatory quadrature behind eval_g.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double truncation_tail = 1e-12; // bound on the neglected integrand mass
    std::size_t max_subdivisions = 200000;
};

/// Density of the 3/2-stable law that shapes forest counts across the
/// critical window:
///
///   g(x) = (1/pi) Int_0^inf exp(-(2/3) t^{3/2}) cos(x t + (2/3) t^{3/2}) dt
///        = e^{x^3/12} [ -Ai'(x^2/4) - (x/2) Ai(x^2/4) ],
///
/// heavy x^{-5/2} tail on the right, exp(-|x|^3/6) decay on the left, and
/// g(0) = -Ai'(0) = 3^{-1/3} / Gamma(1/3). Evaluated by truncating at T with
/// exp(-(2/3)T^{3/2}) <= truncation_tail and resolving the oscillation with
/// panels no wider than a quarter period.
double eval_g(double x, const QuadratureConfig& cfg = {});

/// Same integral evaluated by an unrelated route (double-exponential rule
/// after substituting w = (2/3) t^{3/2}). Kept as an independent cross-check;
/// only accurate for moderate |x|.
double eval_g_de_scheme(double x);

/// Left-tail evaluation through the Airy representation (cancellation-free);
/// eval_g dispatches here below x = -5, where the oscillatory form loses the
/// exp(-|x|^3/6)-sized value under rounding noise. Requires x <= -2.
double eval_g_airy_tail(double x);

/// Int_lo^hi g, by composite quadrature over eval_g values.
double integrate_g(double lo, double hi, const QuadratureConfig& cfg = {});

/// Dense grid cache over [x_min, x_max] with cubic (Catmull-Rom) interpolation
/// between nodes. Immutable after construction; safe for concurrent reads.
/// Out-of-range arguments fall back to direct evaluation.
class StableDensityTable {
public:
    StableDensityTable(double x_min, double x_max, double step, const QuadratureConfig& cfg = {});

    double operator()(double x) const;

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

private:
    double x_min_, x_max_, step_, inv_step_;
    std::vector<double> values_;
    QuadratureConfig cfg_;
};

} // namespace crf

#endif
