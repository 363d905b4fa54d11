#include "crf/stable_density.hpp"

#include <algorithm>
#include <cmath>

#include "crf/errors.hpp"
#include "crf/quadrature.hpp"

namespace crf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Truncation point: exp(-(2/3) T^{3/2}) = tail, solved in closed form. The
// envelope of the integrand is explicit, so the discarded mass is certified
// rather than estimated.
double truncation_point(double tail) {
    double L = -std::log(tail);
    return std::pow(1.5 * L, 2.0 / 3.0);
}

} // namespace

namespace {

// One resolution level of the truncated integral, quarter-period panels
// scaled down by `refine`. The [0,1] piece is taken in the variable t = v^2,
// which makes the integrand analytic (t^{3/2} is not smooth at 0); the [1,T]
// piece is taken directly.
GaussPanel g_integral_passes(double x, double T, double refine) {
    double total15 = 0.0, total7 = 0.0;

    double v_hi = std::sqrt(std::min(1.0, T));
    auto fv = [x](double v) {
        double v3 = (2.0 / 3.0) * v * v * v;
        return 2.0 * v * std::exp(-v3) * std::cos(x * v * v + v3);
    };
    double rate_v = 2.0 * std::fabs(x) + 5.0;
    std::size_t nv = static_cast<std::size_t>(std::ceil(v_hi * rate_v * 4.0 / kPi * refine)) + 1;
    double hv = v_hi / static_cast<double>(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        GaussPanel p = gauss15(fv, hv * static_cast<double>(i), hv * static_cast<double>(i + 1));
        total15 += p.q15;
        total7 += p.q7;
    }

    if (T > 1.0) {
        auto ft = [x](double t) {
            double t32 = (2.0 / 3.0) * t * std::sqrt(t);
            return std::exp(-t32) * std::cos(x * t + t32);
        };
        double rate_t = std::fabs(x) + std::sqrt(T) + 1.0;
        std::size_t nt =
            static_cast<std::size_t>(std::ceil((T - 1.0) * rate_t * 4.0 / kPi * refine)) + 1;
        double ht = (T - 1.0) / static_cast<double>(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            GaussPanel p =
                gauss15(ft, 1.0 + ht * static_cast<double>(i), 1.0 + ht * static_cast<double>(i + 1));
            total15 += p.q15;
            total7 += p.q7;
        }
    }
    return {total15, total7};
}

} // namespace

double eval_g_airy_tail(double x) {
    // With z = x^2/4 the Airy-form identity
    //   g(x) = e^{x^3/12} [-Ai'(z) - (x/2) Ai(z)]
    // reduces, after shifting the Airy contours off the oscillatory axis, to
    // the cancellation-free integral
    //   g(-|x|) = e^{-|x|^3/6} (1/pi) Int_0^inf [s sin(s^3/3) + |x| cos(s^3/3)]
    //                                            e^{-(|x|/2) s^2} ds,
    // which double precision handles far past the point (x ~ -6) where the
    // oscillatory form drowns in rounding noise.
    if (x > -2.0) throw DomainError("eval_g_airy_tail: intended for x <= -2");
    double ax = -x;
    if (ax * ax * ax / 6.0 > 708.0) return 0.0; // below the double range
    auto f = [ax](double s) {
        double s3 = s * s * s / 3.0;
        return (s * std::sin(s3) + ax * std::cos(s3)) * std::exp(-0.5 * ax * s * s);
    };
    double s_hi = 8.0 / std::sqrt(0.5 * ax) + 1.0;
    double body = integrate_adaptive_rel(f, 0.0, s_hi, 1e-300, 1e-11, 20000);
    return std::exp(-ax * ax * ax / 6.0) * body / kPi;
}

double eval_g(double x, const QuadratureConfig& cfg) {
    if (x < -5.0) return eval_g_airy_tail(x);
    const double T = truncation_point(cfg.truncation_tail);
    const double rate = std::fabs(x) + std::sqrt(T) + 1.0;
    if (static_cast<double>(cfg.max_subdivisions) < T * rate * 4.0 / kPi)
        throw AccuracyError("eval_g: oscillation requires more panels than the budget allows", 0.0,
                            1.0);
    GaussPanel sums = g_integral_passes(x, T, 1.0);
    double value = sums.q15 / kPi;
    double err = std::fabs(sums.q15 - sums.q7) / kPi + cfg.truncation_tail;
    if (err > cfg.abs_tol) {
        GaussPanel fine = g_integral_passes(x, T, 2.0);
        double err2 = std::fabs(fine.q15 - fine.q7) / kPi + cfg.truncation_tail;
        value = fine.q15 / kPi;
        if (err2 > cfg.abs_tol)
            throw AccuracyError("eval_g: tolerance not met within budget", value, err2);
    }
    return value;
}

double eval_g_de_scheme(double x) {
    // Substitute w = (2/3) t^{3/2}:  t = (3w/2)^{2/3},
    // g(x) = (1/pi) (3/2)^{2/3} (2/3) Int_0^inf w^{-1/3} e^{-w} cos(x (3w/2)^{2/3} + w) dw.
    const double c = std::pow(1.5, 2.0 / 3.0) * (2.0 / 3.0) / kPi;
    auto f = [x](double w) {
        double t = std::pow(1.5 * w, 2.0 / 3.0);
        return std::pow(w, -1.0 / 3.0) * std::exp(-w) * std::cos(x * t + w);
    };
    return c * integrate_halfline_de(f, 1e-3, 4.6);
}

double integrate_g(double lo, double hi, const QuadratureConfig& cfg) {
    if (lo > hi) throw DomainError("integrate_g: lo > hi");
    if (lo == hi) return 0.0;
    auto f = [&cfg](double x) { return eval_g(x, cfg); };
    double tol = cfg.abs_tol * (hi - lo);
    return integrate_adaptive_rel(f, lo, hi, tol, cfg.abs_tol, cfg.max_subdivisions);
}

StableDensityTable::StableDensityTable(double x_min, double x_max, double step,
                                       const QuadratureConfig& cfg)
    : x_min_(x_min), x_max_(x_max), step_(step), inv_step_(1.0 / step), cfg_(cfg) {
    if (x_max <= x_min || step <= 0) throw DomainError("StableDensityTable: bad grid");
    std::size_t n = static_cast<std::size_t>(std::ceil((x_max - x_min) / step)) + 3;
    values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = eval_g(x_min + step * (static_cast<double>(i) - 1.0), cfg);
        // g is a positive density; any negative node is cancellation noise
        // from the far left tail (true values fall like exp(-|x|^3/6)).
        values_[i] = v > 0.0 ? v : 0.0;
    }
}

double StableDensityTable::operator()(double x) const {
    if (x < x_min_ || x > x_max_) return eval_g(x, cfg_);
    double u = (x - x_min_) * inv_step_;
    std::size_t i = static_cast<std::size_t>(u);
    if (i + 3 >= values_.size()) i = values_.size() - 4;
    double t = u - static_cast<double>(i);
    // Catmull-Rom through the four surrounding nodes (values_ is offset by one
    // ghost node at the front).
    double p0 = values_[i], p1 = values_[i + 1], p2 = values_[i + 2], p3 = values_[i + 3];
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double c = -0.5 * p0 + 0.5 * p2;
    return ((a * t + b) * t + c) * t + p1;
}

} // namespace crf
