#ifndef CRITFOREST_DIFFUSION_HPP
#define CRITFOREST_DIFFUSION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "crf/drift.hpp"
#include "crf/rng.hpp"

namespace crf {

/// Euler path of a reflected diffusion on the grid t_i = i dt.
struct DiffusionPath {
    double lambda = 0.0;
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<double> values; // values[0] = 0, all entries >= 0
};

/// Excursion intervals (grid-aligned zero-to-zero spans) with lengths sorted
/// non-increasing. The final interval may be truncated at the horizon.
struct ExcursionSet {
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> lengths; // non-increasing
};

/// Drift of the acyclicity-corrected diffusion: lambda - t - alpha(z, lambda-t),
/// with alpha(0,.) = 0 by continuous extension.
double drift_field(double t, double z, double lambda, const AlphaTable& alpha);

/// Euler-Maruyama with reflection at 0 through the discrete Skorokhod step
///   Z_{i+1} = max(0, Z_i + drift dt + sqrt(dt) xi_i).
/// The boundary-pushing (local-time) process is not materialized; it is the
/// running sum of the clipped amounts max(0, -(Z_i + drift dt + sqrt(dt) xi)).
DiffusionPath simulate_Z(double lambda, double horizon, double dt, Rng& rng,
                         const AlphaTable& alpha);

/// Same scheme with drift lambda - t (no correction).
DiffusionPath simulate_B(double lambda, double horizon, double dt, Rng& rng);

/// Both diffusions driven by one Gaussian increment stream; the corrected
/// path never exceeds the uncorrected one, grid point by grid point.
std::pair<DiffusionPath, DiffusionPath> coupled_ZB(double lambda, double horizon, double dt,
                                                   Rng& rng, const AlphaTable& alpha);

/// Maximal intervals where the path is positive, measured zero-to-zero on the
/// grid; excursions shorter than or equal to min_length are dropped
/// (min_length >= dt required; 2 dt suppresses single-step artifacts).
ExcursionSet diffusion_excursions(const DiffusionPath& path, double min_length);

} // namespace crf

#endif
