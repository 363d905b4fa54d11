#include "crf/forest_counts.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "crf/errors.hpp"

namespace crf {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Windowed log-sum-exp: one pass for the max, one pass adding only terms
// within `window` nats of it. Terms are produced by term(k) for k in [k_lo, k_hi].
template <typename TermFn>
double lse_over_range(std::int64_t k_lo, std::int64_t k_hi, TermFn&& term, double window = 45.0) {
    double tmax = neg_inf;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        double t = term(k);
        if (t > tmax) tmax = t;
    }
    if (tmax == neg_inf) return neg_inf;
    double sum = 0.0;
    double cut = tmax - window;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        double t = term(k);
        if (t >= cut) sum += std::exp(t - tmax);
    }
    return tmax + std::log(sum);
}

void check_probability(double p, bool allow_zero) {
    if (!(p >= 0.0) || p >= 1.0 || (!allow_zero && p == 0.0))
        throw DomainError("edge probability must lie in (0,1)");
}

double log_choose2(std::int64_t n) {
    return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

} // namespace

double ScalingParams::lambda_window() const {
    double n = static_cast<double>(n_total);
    return std::cbrt(n) * (n * p - 1.0);
}
double ScalingParams::a() const {
    return static_cast<double>(stack_forest_size) / std::pow(static_cast<double>(n_total), 2.0 / 3.0);
}
double ScalingParams::b() const {
    return static_cast<double>(stack_size) / std::cbrt(static_cast<double>(n_total));
}
double ScalingParams::s() const {
    return static_cast<double>(n_total - n_remaining) /
           std::pow(static_cast<double>(n_total), 2.0 / 3.0);
}

ForestCountTable ForestCountTable::build(std::int64_t max_vertices, int threads) {
    if (max_vertices < 1) throw DomainError("ForestCountTable: max_vertices must be >= 1");
    ForestCountTable t;
    t.max_n_ = max_vertices;
    t.lfac_.extend(static_cast<std::size_t>(max_vertices) + 1);
    t.entries_.assign(static_cast<std::size_t>(max_vertices) *
                          static_cast<std::size_t>(max_vertices + 1) / 2,
                      neg_inf);

    std::vector<double> log_k(static_cast<std::size_t>(max_vertices) + 1, 0.0);
    for (std::int64_t k = 1; k <= max_vertices; ++k)
        log_k[static_cast<std::size_t>(k)] = std::log(static_cast<double>(k));

    // Row n uses only rows < n, so rows are built in order and each row is
    // split across threads over m.
    std::vector<double> comp(static_cast<std::size_t>(max_vertices) + 1);
    for (std::int64_t n = 1; n <= max_vertices; ++n) {
        double* row = t.entries_.data() + t.offset(n);
        // comp[k] = log[ C(n-1,k-1) k^{k-2} ]
        for (std::int64_t k = 1; k <= n; ++k)
            comp[static_cast<std::size_t>(k)] =
                t.lfac_.log_binomial(n - 1, k - 1) +
                static_cast<double>(k - 2) * log_k[static_cast<std::size_t>(k)];

        auto fill = [&](std::int64_t m_lo, std::int64_t m_hi) {
            for (std::int64_t m = m_lo; m < m_hi; ++m) {
                if (m == 0) {
                    row[0] = 0.0; // the empty forest
                    continue;
                }
                auto term = [&](std::int64_t k) -> double {
                    std::int64_t n2 = n - k, m2 = m - k + 1;
                    if (m2 < 0) return neg_inf;
                    double prev;
                    if (n2 == 0) {
                        if (m2 != 0) return neg_inf;
                        prev = 0.0;
                    } else {
                        if (m2 > n2 - 1) return neg_inf;
                        prev = t.entries_[t.offset(n2) + static_cast<std::size_t>(m2)];
                    }
                    return comp[static_cast<std::size_t>(k)] + prev;
                };
                std::int64_t k_hi = std::min<std::int64_t>(n, m + 1);
                // k >= m+1-(n2-1) ... the m2 <= n2-1 constraint; derive k_lo directly.
                std::int64_t k_lo = std::max<std::int64_t>(1, m + 2 - (n - 1));
                row[m] = lse_over_range(k_lo, k_hi, term);
            }
        };

        if (threads > 1 && n >= 512) {
            std::vector<std::thread> pool;
            std::int64_t chunk = (n + threads - 1) / threads;
            for (int ti = 0; ti < threads; ++ti) {
                std::int64_t lo = ti * chunk;
                std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back(fill, lo, hi);
            }
            for (auto& th : pool) th.join();
        } else {
            fill(0, n);
        }
    }
    return t;
}

double ForestCountTable::log_count(std::int64_t n, std::int64_t m) const {
    if (n < 0 || m < 0 || (n == 0 && m > 0) || (n >= 1 && m > n - 1))
        throw DomainError("log_count: need 0 <= m <= max(n-1,0)");
    if (n == 0) return 0.0;
    if (n > max_n_) throw CapacityError("log_count: table built only up to n=" +
                                        std::to_string(max_n_));
    return entries_[offset(n) + static_cast<std::size_t>(m)];
}

double log_acyclic_probability(const ForestCountTable& table, std::int64_t n, double p) {
    if (n < 0) throw DomainError("log_acyclic_probability: n < 0");
    if (n <= 2) return 0.0; // no cycle is possible
    check_probability(p, /*allow_zero=*/true);
    if (p == 0.0) return 0.0;
    if (n > table.max_vertices())
        throw CapacityError("log_acyclic_probability: table too small");
    double logw = std::log(p) - std::log1p(-p);
    auto term = [&](std::int64_t m) { return table.log_count(n, m) + static_cast<double>(m) * logw; };
    double lse = lse_over_range(0, n - 1, term, 60.0);
    return log_choose2(n) * std::log1p(-p) + lse;
}

double acyclic_probability(const ForestCountTable& table, std::int64_t n, double p) {
    return std::exp(log_acyclic_probability(table, n, p));
}

AcyclicProbabilityProfile AcyclicProbabilityProfile::build(std::int64_t max_vertices, double p) {
    if (max_vertices < 0) throw DomainError("AcyclicProbabilityProfile: max_vertices < 0");
    check_probability(p, /*allow_zero=*/true);
    AcyclicProbabilityProfile prof;
    prof.max_n_ = max_vertices;
    prof.p_ = p;
    prof.lfac_.extend(static_cast<std::size_t>(max_vertices) + 2);
    prof.log_weighted_.assign(static_cast<std::size_t>(max_vertices) + 1, 0.0);
    prof.log_acyclic_.assign(static_cast<std::size_t>(max_vertices) + 1, 0.0);

    double logw = p == 0.0 ? neg_inf : std::log(p) - std::log1p(-p);
    double log1mp = std::log1p(-p);

    // kpart[k] = log[ k^{k-2} w^{k-1} ]; k=1 is 0 even when w=0.
    std::vector<double> kpart(static_cast<std::size_t>(max_vertices) + 1, 0.0);
    for (std::int64_t k = 2; k <= max_vertices; ++k)
        kpart[static_cast<std::size_t>(k)] =
            static_cast<double>(k - 2) * std::log(static_cast<double>(k)) +
            static_cast<double>(k - 1) * logw;

    const auto& lf = prof.lfac_;
    for (std::int64_t n = 1; n <= max_vertices; ++n) {
        double lfn1 = lf.log_factorial(n - 1);
        double tmax = neg_inf;
        // The summand decays geometrically once k passes a few multiples of
        // n^{2/3}; after the max it only falls, so the scan can stop once the
        // terms are far below the maximum and past that scale.
        std::int64_t safe_k = static_cast<std::int64_t>(
                                  8.0 * std::pow(static_cast<double>(n), 2.0 / 3.0)) +
                              64;
        std::int64_t k_stop = n;
        for (std::int64_t k = 1; k <= n; ++k) {
            double tk = lfn1 - lf.log_factorial(k - 1) - lf.log_factorial(n - k) +
                        kpart[static_cast<std::size_t>(k)] +
                        prof.log_weighted_[static_cast<std::size_t>(n - k)];
            if (tk > tmax) tmax = tk;
            if (k > safe_k && tk < tmax - 120.0) {
                k_stop = k;
                break;
            }
        }
        double sum = 0.0;
        double cut = tmax - 45.0;
        for (std::int64_t k = 1; k <= k_stop; ++k) {
            double tk = lfn1 - lf.log_factorial(k - 1) - lf.log_factorial(n - k) +
                        kpart[static_cast<std::size_t>(k)] +
                        prof.log_weighted_[static_cast<std::size_t>(n - k)];
            if (tk >= cut) sum += std::exp(tk - tmax);
        }
        prof.log_weighted_[static_cast<std::size_t>(n)] = tmax + std::log(sum);
        prof.log_acyclic_[static_cast<std::size_t>(n)] =
            log_choose2(n) * log1mp + prof.log_weighted_[static_cast<std::size_t>(n)];
    }
    return prof;
}

double AcyclicProbabilityProfile::log_acyclic(std::int64_t n) const {
    if (n < 0) throw DomainError("log_acyclic: n < 0");
    if (n > max_n_)
        throw CapacityError("log_acyclic: profile built only up to n=" + std::to_string(max_n_));
    return log_acyclic_[static_cast<std::size_t>(n)];
}

AsymptoticCount britikov_log_count(std::int64_t n, std::int64_t m, const QuadratureConfig& gcfg,
                                   double window_c) {
    if (n < 1 || m < 0 || m > n - 1) throw DomainError("britikov_log_count: bad (n,m)");
    double nn = static_cast<double>(n);
    double n23 = std::pow(nn, 2.0 / 3.0);
    double x = (2.0 * static_cast<double>(m) - nn) / n23;
    bool in_window = std::fabs(2.0 * static_cast<double>(m) - nn) <= window_c * n23;
    double g = eval_g(x, gcfg);
    double log_g = g > 0.0 ? std::log(g) : neg_inf;
    double log_value = 0.5 * kLog2Pi + (nn - 1.0 / 6.0) * std::log(nn) + log_g -
                       static_cast<double>(n - m) * 0.6931471805599453 -
                       std::lgamma(static_cast<double>(n - m) + 1.0);
    return {log_value, in_window};
}

double acyclic_probability_asymptotic(std::int64_t n, double p, const QuadratureConfig& gcfg) {
    double nn = static_cast<double>(n);
    double lambda = std::cbrt(nn) * (nn * p - 1.0);
    return eval_g(lambda, gcfg) * std::exp(0.75 - lambda * lambda * lambda / 6.0) *
           std::sqrt(2.0 * 3.14159265358979323846) * std::pow(nn, -1.0 / 6.0);
}

namespace {

// Shared log-space core of P(G(n,p) in A_{n,r,k}); log_acyclic_tail is
// log P(G(n-k,p) acyclic).
double log_stack_forest_core(const LogFactorialCache& lf, std::int64_t n, std::int64_t r,
                             std::int64_t k, double p, double log_acyclic_tail) {
    if (r < 1 || r > k || k > n) throw DomainError("stack forest event needs 1 <= r <= k <= n");
    double log1mp = std::log1p(-p);
    double logw = std::log(p) - log1mp;
    double slots = log_choose2(n) - log_choose2(n - k);
    return slots * log1mp + lf.log_binomial(n - r, k - r) +
           static_cast<double>(k - r) * logw + std::log(static_cast<double>(r)) +
           static_cast<double>(k - r - 1) * std::log(static_cast<double>(k)) + log_acyclic_tail;
}

} // namespace

double log_stack_forest_prob(const AcyclicProbabilityProfile& profile, std::int64_t n,
                             std::int64_t r, std::int64_t k) {
    if (n > profile.max_vertices()) throw CapacityError("log_stack_forest_prob: profile too small");
    check_probability(profile.p(), false);
    return log_stack_forest_core(profile.log_factorials(), n, r, k, profile.p(),
                                 profile.log_acyclic(n - k));
}

double stack_forest_prob(const ForestCountTable& table, std::int64_t n, std::int64_t r,
                         std::int64_t k, double p) {
    check_probability(p, false);
    double tail = log_acyclic_probability(table, n - k, p);
    return std::exp(log_stack_forest_core(table.log_factorials(), n, r, k, p, tail));
}

double log_separated_prob(const AcyclicProbabilityProfile& profile, std::int64_t n,
                          std::int64_t r) {
    if (r < 0 || r > n) throw DomainError("log_separated_prob: need 0 <= r <= n");
    if (r == 0) return profile.log_acyclic(n);
    const auto& lf = profile.log_factorials();
    double p = profile.p();
    double tmax = neg_inf;
    std::int64_t safe_k =
        r + static_cast<std::int64_t>(8.0 * std::pow(static_cast<double>(n), 2.0 / 3.0)) + 64;
    std::int64_t k_stop = n;
    for (std::int64_t k = r; k <= n; ++k) {
        double tk = log_stack_forest_core(lf, n, r, k, p, profile.log_acyclic(n - k));
        if (tk > tmax) tmax = tk;
        if (k > safe_k && tk < tmax - 120.0) {
            k_stop = k;
            break;
        }
    }
    if (tmax == neg_inf) return neg_inf;
    double sum = 0.0;
    double cut = tmax - 45.0;
    for (std::int64_t k = r; k <= k_stop; ++k) {
        double tk = log_stack_forest_core(lf, n, r, k, p, profile.log_acyclic(n - k));
        if (tk >= cut) sum += std::exp(tk - tmax);
    }
    return tmax + std::log(sum);
}

double stack_forest_prob_asymptotic(const ScalingParams& sp, const QuadratureConfig& gcfg) {
    double a = sp.a();
    if (a <= 0.0) throw DomainError("stack_forest_prob_asymptotic: requires k > 0 (a > 0)");
    double b = sp.b();
    double s = sp.s();
    double L = sp.lambda_window();
    double nn = static_cast<double>(sp.n_total);
    double ls = L - s;
    double expo = -b * ls - b * b / (2.0 * a) - ls * ls * ls / 6.0;
    return std::exp(0.75) * eval_g(ls - a, gcfg) * std::pow(nn, -5.0 / 6.0) * b *
           std::pow(a, -1.5) * std::exp(expo);
}

double expected_stack_forest_size(const AcyclicProbabilityProfile& profile, std::int64_t n,
                                  std::int64_t r) {
    if (r < 1 || r > n) throw DomainError("expected_stack_forest_size: need 1 <= r <= n");
    const auto& lf = profile.log_factorials();
    double p = profile.p();
    double tmax = neg_inf;
    for (std::int64_t k = r; k <= n; ++k) {
        double tk = log_stack_forest_core(lf, n, r, k, p, profile.log_acyclic(n - k));
        if (tk > tmax) tmax = tk;
    }
    double den = 0.0, num = 0.0;
    double cut = tmax - 45.0;
    for (std::int64_t k = r; k <= n; ++k) {
        double tk = log_stack_forest_core(lf, n, r, k, p, profile.log_acyclic(n - k));
        if (tk >= cut - std::log(static_cast<double>(n))) {
            double e = std::exp(tk - tmax);
            den += e;
            num += e * static_cast<double>(k);
        }
    }
    return num / den;
}

} // namespace crf
