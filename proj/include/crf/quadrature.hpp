#ifndef CRITFOREST_QUADRATURE_HPP
#define CRITFOREST_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "crf/errors.hpp"

namespace crf {

/// Gauss-Legendre 15-point rule on [a,b], with the embedded 7-point value
/// returned for an error estimate.
struct GaussPanel {
    double q15;
    double q7;
};

template <typename F>
GaussPanel gauss15(F&& f, double a, double b) {
    // Nodes/weights for n=15 on [-1,1]; the odd-indexed nodes form the n=7 rule.
    static const double x15[15] = {
        -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
        -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
        -0.2011940939974345, 0.0,                 0.2011940939974345,
        0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
        0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
    static const double w15[15] = {
        0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
        0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
        0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
        0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
        0.1071592204671719, 0.0703660474881081, 0.0307532419961173};
    static const double x7[7] = {
        -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
        0.0,                 0.4058451513773972,  0.7415311855993945,
        0.9491079123427585};
    static const double w7[7] = {
        0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
        0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
        0.1294849661688697};

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s15 = 0.0;
    for (int i = 0; i < 15; ++i) s15 += w15[i] * f(mid + half * x15[i]);
    double s7 = 0.0;
    for (int i = 0; i < 7; ++i) s7 += w7[i] * f(mid + half * x7[i]);
    return {half * s15, half * s7};
}

/// Adaptive bisection driven by the |GL15 - GL7| panel estimate, stopping at
/// max(abs_tol, rel_tol * |estimate|). Throws AccuracyError (carrying the best
/// estimate and the bound actually reached) if the panel budget runs out.
template <typename F>
double integrate_adaptive_rel(F&& f, double a, double b, double abs_tol, double rel_tol,
                              std::size_t max_panels = 4000) {
    struct Seg {
        double a, b, q15, err;
    };
    std::vector<Seg> stack;
    auto make = [&](double lo, double hi) {
        GaussPanel p = gauss15(f, lo, hi);
        return Seg{lo, hi, p.q15, std::fabs(p.q15 - p.q7)};
    };
    stack.push_back(make(a, b));
    std::size_t used = 1;
    while (true) {
        double estimate = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < stack.size(); ++i) {
            estimate += stack[i].q15;
            err += stack[i].err;
            if (stack[i].err > stack[worst].err) worst = i;
        }
        double tol = abs_tol > rel_tol * std::fabs(estimate) ? abs_tol : rel_tol * std::fabs(estimate);
        if (err <= tol) return estimate;
        if (used + 2 > max_panels)
            throw AccuracyError("adaptive quadrature: panel budget exceeded", estimate, err);
        Seg s = stack[worst];
        stack[worst] = stack.back();
        stack.pop_back();
        double mid = 0.5 * (s.a + s.b);
        stack.push_back(make(s.a, mid));
        stack.push_back(make(mid, s.b));
        used += 2;
    }
}

/// Non-adaptive composite GL15 over fixed-width panels; used where the panel
/// width is chosen analytically (oscillation control) rather than adaptively.
template <typename F>
double integrate_panels(F&& f, double a, double b, double panel_width) {
    if (b <= a) return 0.0;
    std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / panel_width));
    if (n < 1) n = 1;
    double h = (b - a) / static_cast<double>(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += gauss15(f, a + h * static_cast<double>(i), a + h * static_cast<double>(i + 1)).q15;
    return total;
}

/// Double-exponential (tanh-sinh style) rule for ∫_0^∞ f, assuming f decays
/// at least exponentially. Used as an independent cross-check scheme.
template <typename F>
double integrate_halfline_de(F&& f, double step = 2e-3, double cutoff = 4.5) {
    // x = exp(pi/2 * sinh(s)), dx = x * pi/2 * cosh(s) ds
    double total = 0.0;
    for (double s = -cutoff; s <= cutoff; s += step) {
        double sh = std::sinh(s);
        double x = std::exp(1.5707963267948966 * sh);
        double w = x * 1.5707963267948966 * std::cosh(s);
        if (!std::isfinite(x) || !std::isfinite(w)) continue;
        total += f(x) * w;
    }
    return total * step;
}

} // namespace crf

#endif
