#ifndef CRITFOREST_EXPLORATION_HPP
#define CRITFOREST_EXPLORATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "crf/forest_counts.hpp"
#include "crf/graph.hpp"
#include "crf/rng.hpp"

namespace crf {

/// Breadth-first exploration record: the vertex order (vertices as first
/// seen) and the stack sizes Z_0..Z_N. Zeros of Z partition the order into
/// components.
struct ExplorationTrace {
    std::int64_t n_vertices = 0;
    std::vector<std::int32_t> order;       // v_1..v_N (0-based vertex ids)
    std::vector<std::int32_t> stack_sizes; // Z_0..Z_N
};

/// Deterministic breadth-first exploration: new roots are the smallest unseen
/// label, neighbours are appended in increasing label order.
ExplorationTrace explore(const Graph& g);

/// Throws DomainError when the trace violates its invariants (Z_0 = Z_N = 0,
/// increments >= -1, order a permutation).
void validate_trace(const ExplorationTrace& trace);

/// Gaps between consecutive zeros of Z, sorted non-increasing. Equals the
/// multiset of component sizes.
std::vector<std::int64_t> excursion_lengths(const ExplorationTrace& trace);

/// Step function s -> N^{-1/3} Z_{floor(N^{2/3} s)} over [0, horizon/N^{2/3}].
struct RescaledPath {
    double time_step = 0.0; // N^{-2/3}
    double space_scale = 0.0; // N^{-1/3}
    std::vector<double> values;
    double value_at(double s) const;
};
RescaledPath rescale_trace(const std::vector<std::int32_t>& stack_prefix, std::int64_t n);

/// One row of the exploration-chain transition kernel: probabilities of the
/// increment l-1 for l = 0..support. Rows are truncated where the binomial
/// factor falls 40 nats below the row maximum and renormalised.
struct IncrementDistribution {
    std::int64_t stack_size = 0; // the r the row was built for (after r=0 -> r=1)
    std::vector<double> probs;   // probs[l] = P(increment = l-1)
    std::int64_t sample_increment(Rng& rng) const;
};

/// Shared, immutable-after-prefill cache of log P(G(n',p) in A_{n',j}) values
/// for the kernel. Entries outside the prefilled block are computed on the
/// fly (pure function, no insertion), so concurrent reads stay safe.
class SeparatedProbCache {
public:
    SeparatedProbCache(const AcyclicProbabilityProfile& profile, std::int64_t n_lo,
                       std::int64_t n_hi, std::int64_t j_cap);

    void prefill(int threads = 1);

    double log_separated(std::int64_t n_prime, std::int64_t j) const;

    const AcyclicProbabilityProfile& profile() const { return *profile_; }

private:
    const AcyclicProbabilityProfile* profile_;
    std::int64_t n_lo_, n_hi_, j_cap_;
    bool filled_ = false;
    std::vector<double> block_; // (n_hi-n_lo+1) x (j_cap+1)
};

/// Exact transition row of the exploration chain of the acyclicity-conditioned
/// graph at (n, r):
///   P(increment = l-1) ~ Binom(N-n-r; p)(l) * P(G(N-n-1,p) in A_{N-n-1, r+l-1})
/// with the r = 0 row defined equal to the r = 1 row. The separation factors
/// come from `cache`, whose profile must cover N - n - 1.
IncrementDistribution transition_kernel(const SeparatedProbCache& cache, std::int64_t n_total,
                                        std::int64_t n, std::int64_t r);

/// Stack-size prefix Z_0..Z_horizon simulated directly from the kernel rows,
/// with no graph in sight.
std::vector<std::int32_t> simulate_kernel_chain(const SeparatedProbCache& cache,
                                                std::int64_t n_total, std::int64_t horizon,
                                                Rng& rng);

/// Binned increment statistics over an ensemble of chain prefixes, the
/// estimands of the drift/variance/jump/stickiness limits.
struct IncrementBin {
    std::int64_t count = 0;
    double sum_scaled = 0.0, sum_scaled_sq = 0.0; // x = N^{1/3} (Z_{n+1} - Z_n)
    double sum_sq_incr = 0.0, sum_sq_incr_sq = 0.0;
    std::int64_t jump_count = 0;
    double sum_predicted = 0.0;
    double sum_t = 0.0, sum_b = 0.0;

    double mean_scaled() const { return sum_scaled / static_cast<double>(count); }
    double se_scaled() const;
    double mean_sq() const { return sum_sq_incr / static_cast<double>(count); }
    double se_sq() const;
    double mean_predicted() const { return sum_predicted / static_cast<double>(count); }
};
struct StickyBin {
    std::int64_t count = 0;
    double sum_sq_next = 0.0;
    double mean_sq_next() const { return sum_sq_next / static_cast<double>(count); }
};
struct IncrementStats {
    int time_bins = 0, height_bins = 0;
    double t_max = 0.0, b_max = 0.0, jump_delta = 0.0;
    std::vector<IncrementBin> bins; // time-major: bins[ti * height_bins + bi]
    std::vector<StickyBin> sticky;  // per time bin, conditioned on Z_n = 0
};
IncrementStats empirical_increment_stats(
    const std::vector<std::vector<std::int32_t>>& prefixes, std::int64_t n_total, double t_max,
    int time_bins, double b_max, int height_bins, double jump_delta = 0.5,
    const std::function<double(double, double)>& predicted_drift = nullptr);

} // namespace crf

#endif
