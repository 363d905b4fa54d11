#ifndef CRITFOREST_ANALYSIS_HPP
#define CRITFOREST_ANALYSIS_HPP

#include <cstdint>
#include <vector>

#include "crf/rng.hpp"

namespace crf {

/// Ensemble of non-increasing, non-negative size vectors (rescaled component
/// sizes or excursion lengths), conceptually zero-padded to equal length.
struct SizeSample {
    std::vector<std::vector<double>> replicas;
};

/// Two-sample Kolmogorov-Smirnov statistic, sup |F_a - F_b|.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Permutation p-value for the two-sample KS statistic (pooled relabelling).
double ks_permutation_pvalue(const std::vector<double>& a, const std::vector<double>& b,
                             int n_permutations, Rng& rng);

/// Permutation estimate of the level-alpha critical value of the two-sample
/// KS statistic at these sample sizes.
double ks_permutation_critical(std::size_t n_a, std::size_t n_b, double alpha,
                               int n_permutations, Rng& rng);

/// Weak majorisation: every prefix sum of the non-increasing rearrangement of
/// a dominates that of b (shorter side zero-padded).
bool weak_majorises(std::vector<double> a, std::vector<double> b);

/// Sum of squares beyond rank k of a non-increasing sequence.
double l2_tail(const std::vector<double>& sizes, std::size_t k);

/// Per-rank location summaries across replicas (ranks are zero-padded).
struct RankStats {
    double mean = 0.0;
    double median = 0.0;
    double deciles[9] = {0}; // q10..q90
};
std::vector<RankStats> component_spectrum(const SizeSample& sample, std::size_t k);

/// Upper regularized incomplete gamma Q(s, x); the chi-square survival
/// function is Q(df/2, stat/2).
double gamma_q(double s, double x);

/// Pearson statistic p-value against equal cell probabilities.
double chisq_uniform_pvalue(const std::vector<std::int64_t>& counts);

/// Pearson p-value against the given cell probabilities.
double chisq_pvalue(const std::vector<std::int64_t>& counts, const std::vector<double>& probs);

/// Two-sample chi-square homogeneity p-value over shared categories.
double chisq_two_sample_pvalue(const std::vector<std::int64_t>& a,
                               const std::vector<std::int64_t>& b);

} // namespace crf

#endif
