#ifndef CRITFOREST_LOGSPACE_HPP
#define CRITFOREST_LOGSPACE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace crf {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

/// Streaming log-sum-exp accumulator. Terms more than `window` nats below the
/// running maximum are known to contribute less than exp(-window) each and can
/// be skipped by the caller; the accumulator itself is exact for what it sees.
class LogSumAccumulator {
public:
    void add(double log_term) {
        if (log_term == neg_inf) return;
        if (log_term > max_) {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        } else {
            sum_ += std::exp(log_term - max_);
        }
    }
    double value() const {
        if (sum_ == 0.0) return neg_inf;
        return max_ + std::log(sum_);
    }
    bool empty() const { return sum_ == 0.0; }

private:
    double max_ = neg_inf;
    double sum_ = 0.0;
};

/// Cached lgamma(k) for integer k in [0, n]; entry k holds lgamma(k+1) = log k!.
class LogFactorialCache {
public:
    explicit LogFactorialCache(std::size_t max_n = 0) { extend(max_n); }

    void extend(std::size_t max_n) {
        std::size_t old = table_.size();
        if (max_n + 1 <= old) return;
        table_.resize(max_n + 1);
        if (old == 0) {
            table_[0] = 0.0;
            old = 1;
        }
        for (std::size_t k = old; k <= max_n; ++k)
            table_[k] = table_[k - 1] + std::log(static_cast<double>(k));
    }

    double log_factorial(long long n) const { return table_[static_cast<std::size_t>(n)]; }

    double log_binomial(long long n, long long k) const {
        if (k < 0 || k > n) return neg_inf;
        return table_[static_cast<std::size_t>(n)] - table_[static_cast<std::size_t>(k)] -
               table_[static_cast<std::size_t>(n - k)];
    }

    std::size_t capacity() const { return table_.empty() ? 0 : table_.size() - 1; }

private:
    std::vector<double> table_;
};

/// log C(n,k) via lgamma, for one-off use.
inline double log_binomial(double n, double k) {
    if (k < 0 || k > n) return neg_inf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace crf

#endif
