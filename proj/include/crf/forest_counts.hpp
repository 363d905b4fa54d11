#ifndef CRITFOREST_FOREST_COUNTS_HPP
#define CRITFOREST_FOREST_COUNTS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "crf/logspace.hpp"
#include "crf/stable_density.hpp"

namespace crf {

/// Critical-window rescalings shared by the asymptotic formulas. Derived
/// quantities are always recomputed from the raw integers, never stored.
struct ScalingParams {
    std::int64_t n_total = 0;  // N
    double p = 0.0;            // edge probability
    std::int64_t n_remaining = 0; // N' <= N, vertices not yet explored
    std::int64_t stack_size = 0;  // r
    std::int64_t stack_forest_size = 0; // k

    double lambda_window() const; // N^{1/3} (N p - 1)
    double a() const;             // k / N^{2/3}
    double b() const;             // r / N^{1/3}
    double s() const;             // (N - N') / N^{2/3}
};

/// Table of log f(n,m), the number of forests on n labelled vertices with m
/// edges, for all n <= max_vertices and 0 <= m <= n-1. Natural-log values;
/// built bottom-up from the component-of-smallest-label decomposition
///
///   f(n,m) = sum_k C(n-1,k-1) k^{k-2} f(n-k, m-k+1),
///
/// accumulated with log-sum-exp. Immutable after build; concurrent reads are
/// safe. Memory is ~n^2/2 doubles, which in practice caps exact-table paths
/// around n ~ 5000.
class ForestCountTable {
public:
    static ForestCountTable build(std::int64_t max_vertices, int threads = 1);

    std::int64_t max_vertices() const { return max_n_; }

    /// log f(n,m). Throws DomainError for m outside [0, n-1] (n >= 1) and
    /// CapacityError for n beyond the build size.
    double log_count(std::int64_t n, std::int64_t m) const;

    const LogFactorialCache& log_factorials() const { return lfac_; }

private:
    ForestCountTable() = default;
    std::size_t offset(std::int64_t n) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    }
    std::int64_t max_n_ = 0;
    std::vector<double> entries_; // row n at offset n(n-1)/2, length n (m = 0..n-1)
    LogFactorialCache lfac_;
};

/// log P(G(n,p) acyclic) = log[ (1-p)^C(n,2) sum_m f(n,m) (p/(1-p))^m ],
/// computed fully in log space from the exact table.
double log_acyclic_probability(const ForestCountTable& table, std::int64_t n, double p);
double acyclic_probability(const ForestCountTable& table, std::int64_t n, double p);

/// The same quantity for every n' <= max_vertices at one fixed p, with O(n)
/// memory: the m-sum is folded into the recursion,
///   W(n) = sum_k C(n-1,k-1) k^{k-2} w^{k-1} W(n-k),  w = p/(1-p),
/// and log P(acyclic)(n) = C(n,2) log(1-p) + log W(n). This is what makes the
/// exact exploration kernel usable at n ~ 10^5-10^6, far beyond the table cap.
class AcyclicProbabilityProfile {
public:
    static AcyclicProbabilityProfile build(std::int64_t max_vertices, double p);

    std::int64_t max_vertices() const { return max_n_; }
    double p() const { return p_; }

    /// log P(G(n,p) acyclic); throws CapacityError beyond the build size.
    double log_acyclic(std::int64_t n) const;

    const LogFactorialCache& log_factorials() const { return lfac_; }

private:
    std::int64_t max_n_ = 0;
    double p_ = 0.0;
    std::vector<double> log_weighted_; // log W(n)
    std::vector<double> log_acyclic_;  // log P(G(n,p) acyclic)
    LogFactorialCache lfac_;
};

/// Britikov-style estimate of f(n,m) in the critical window:
///   sqrt(2 pi) n^{n-1/6} g((2m-n)/n^{2/3}) / (2^{n-m} (n-m)!).
/// `in_window` is false when |2m-n| > window_c * n^{2/3}; the value is still
/// evaluated, since the estimate is only guaranteed uniform inside the window.
struct AsymptoticCount {
    double log_value;
    bool in_window;
};
AsymptoticCount britikov_log_count(std::int64_t n, std::int64_t m,
                                   const QuadratureConfig& gcfg = {}, double window_c = 2.0);

/// g(Lambda) e^{3/4 - Lambda^3/6} sqrt(2 pi) n^{-1/6}, the window asymptotic
/// for P(G(n,p) acyclic) with Lambda = n^{1/3}(np - 1).
double acyclic_probability_asymptotic(std::int64_t n, double p, const QuadratureConfig& gcfg = {});

/// log P(G(n,p) in A_{n,r,k}): vertices [r] separated with stack forest of
/// total size k,
///   (1-p)^{C(n,2)-C(n-k,2)} C(n-r,k-r) (p/(1-p))^{k-r} r k^{k-r-1} P(G(n-k,p) acyclic).
/// The acyclic factor comes from the profile, so n can be large.
double log_stack_forest_prob(const AcyclicProbabilityProfile& profile, std::int64_t n,
                             std::int64_t r, std::int64_t k);
double stack_forest_prob(const ForestCountTable& table, std::int64_t n, std::int64_t r,
                         std::int64_t k, double p);

/// log P(G(n,p) in A_{n,r}) = log sum_k P(G(n,p) in A_{n,r,k}). For r = 0 the
/// separation condition is vacuous and this is log P(acyclic). The k-sum is
/// truncated once terms fall 60 nats below the running maximum and keep
/// decreasing, which the cubic decay of the summand guarantees is safe.
double log_separated_prob(const AcyclicProbabilityProfile& profile, std::int64_t n,
                          std::int64_t r);

/// Window asymptotic for P(G(n',p) in A_{n',r,k}), in the rescaled variables
/// with L = Lambda(N,p) - s:
///   e^{3/4} g(L-a) N^{-5/6} b a^{-3/2} exp(-bL - b^2/(2a) - L^3/6).
/// Throws DomainError when k = 0 (a = 0).
double stack_forest_prob_asymptotic(const ScalingParams& sp, const QuadratureConfig& gcfg = {});

/// E[ stack forest size | [r] separated ] = sum_k k P(A_{n,r,k}) / sum_k P(A_{n,r,k}),
/// evaluated exactly in log space.
double expected_stack_forest_size(const AcyclicProbabilityProfile& profile, std::int64_t n,
                                  std::int64_t r);

} // namespace crf

#endif
