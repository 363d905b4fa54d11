#include "crf/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "crf/errors.hpp"

namespace crf {

double drift_field(double t, double z, double lambda, const AlphaTable& alpha) {
    if (z < 0.0) throw DomainError("drift_field: z < 0");
    return lambda - t - alpha.alpha(z, lambda - t);
}

namespace {

DiffusionPath euler_reflected(double lambda, double horizon, double dt, Rng& rng,
                              const AlphaTable* alpha) {
    if (dt <= 0.0 || horizon <= 0.0) throw DomainError("simulate: need dt > 0, horizon > 0");
    DiffusionPath p;
    p.lambda = lambda;
    p.dt = dt;
    p.horizon = horizon;
    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    p.values.assign(steps + 1, 0.0);
    const double sqdt = std::sqrt(dt);
    double z = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        double t = dt * static_cast<double>(i);
        double mu = lambda - t;
        if (alpha) mu -= alpha->alpha(z, lambda - t);
        z = z + mu * dt + sqdt * rng.normal();
        if (z < 0.0) z = 0.0;
        p.values[i + 1] = z;
    }
    return p;
}

} // namespace

DiffusionPath simulate_Z(double lambda, double horizon, double dt, Rng& rng,
                         const AlphaTable& alpha) {
    return euler_reflected(lambda, horizon, dt, rng, &alpha);
}

DiffusionPath simulate_B(double lambda, double horizon, double dt, Rng& rng) {
    return euler_reflected(lambda, horizon, dt, rng, nullptr);
}

std::pair<DiffusionPath, DiffusionPath> coupled_ZB(double lambda, double horizon, double dt,
                                                   Rng& rng, const AlphaTable& alpha) {
    if (dt <= 0.0 || horizon <= 0.0) throw DomainError("coupled_ZB: need dt > 0, horizon > 0");
    DiffusionPath pz, pb;
    pz.lambda = pb.lambda = lambda;
    pz.dt = pb.dt = dt;
    pz.horizon = pb.horizon = horizon;
    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    pz.values.assign(steps + 1, 0.0);
    pb.values.assign(steps + 1, 0.0);
    const double sqdt = std::sqrt(dt);
    double z = 0.0, b = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        double t = dt * static_cast<double>(i);
        double xi = sqdt * rng.normal();
        z = std::max(0.0, z + (lambda - t - alpha.alpha(z, lambda - t)) * dt + xi);
        b = std::max(0.0, b + (lambda - t) * dt + xi);
        pz.values[i + 1] = z;
        pb.values[i + 1] = b;
    }
    return {std::move(pz), std::move(pb)};
}

ExcursionSet diffusion_excursions(const DiffusionPath& path, double min_length) {
    if (min_length < path.dt) throw DomainError("diffusion_excursions: min_length < dt");
    ExcursionSet out;
    const std::size_t n = path.values.size();
    std::size_t i = 0;
    while (i < n) {
        if (path.values[i] > 0.0) {
            // Positive run starting at i; the excursion spans the surrounding zeros.
            std::size_t start = i == 0 ? 0 : i - 1;
            std::size_t j = i;
            while (j < n && path.values[j] > 0.0) ++j;
            std::size_t end = j < n ? j : n - 1; // truncated at the horizon if open
            double t0 = path.dt * static_cast<double>(start);
            double t1 = path.dt * static_cast<double>(end);
            if (t1 - t0 > min_length) out.intervals.emplace_back(t0, t1);
            i = j;
        } else {
            ++i;
        }
    }
    out.lengths.reserve(out.intervals.size());
    for (const auto& iv : out.intervals) out.lengths.push_back(iv.second - iv.first);
    std::sort(out.lengths.begin(), out.lengths.end(), std::greater<>());
    return out;
}

} // namespace crf
