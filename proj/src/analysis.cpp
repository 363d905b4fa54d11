#include "crf/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "crf/errors.hpp"

namespace crf {

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw DomainError("ks_distance: empty sample");
    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

namespace {

double ks_of_pooled(const std::vector<double>& pooled, const std::vector<char>& label,
                    std::size_t n_a, std::size_t n_b) {
    // pooled is sorted; labels say which sample each point came from.
    double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
    double fa = 0.0, fb = 0.0, d = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        if (label[i]) {
            fa += 1.0 / na;
        } else {
            fb += 1.0 / nb;
        }
        // Only evaluate at the right edge of ties.
        if (i + 1 < pooled.size() && pooled[i + 1] == pooled[i]) continue;
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

} // namespace

double ks_permutation_pvalue(const std::vector<double>& a, const std::vector<double>& b,
                             int n_permutations, Rng& rng) {
    double observed = ks_distance(a, b);
    std::vector<std::pair<double, char>> pool;
    pool.reserve(a.size() + b.size());
    for (double x : a) pool.emplace_back(x, 1);
    for (double x : b) pool.emplace_back(x, 0);
    std::sort(pool.begin(), pool.end());
    std::vector<double> values(pool.size());
    std::vector<char> label(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) values[i] = pool[i].first;

    int hits = 0;
    for (int rep = 0; rep < n_permutations; ++rep) {
        // Random relabelling: choose which |a| of the pooled points are "a".
        std::vector<char> lab(pool.size(), 0);
        std::size_t remaining = a.size();
        for (std::size_t i = 0; i < pool.size() && remaining > 0; ++i) {
            std::size_t left = pool.size() - i;
            if (rng.below(left) < remaining) {
                lab[i] = 1;
                --remaining;
            }
        }
        if (ks_of_pooled(values, lab, a.size(), b.size()) >= observed - 1e-15) ++hits;
    }
    return (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(n_permutations));
}

double ks_permutation_critical(std::size_t n_a, std::size_t n_b, double alpha,
                               int n_permutations, Rng& rng) {
    // Null samples: both sides uniform; the KS statistic's null law only
    // depends on the sizes (up to ties, absent for continuous draws).
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(n_permutations));
    for (int rep = 0; rep < n_permutations; ++rep) {
        std::vector<double> a(n_a), b(n_b);
        for (auto& x : a) x = rng.u01();
        for (auto& x : b) x = rng.u01();
        stats.push_back(ks_distance(a, b));
    }
    std::sort(stats.begin(), stats.end());
    std::size_t idx = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(stats.size())));
    if (idx >= stats.size()) idx = stats.size() - 1;
    return stats[idx];
}

bool weak_majorises(std::vector<double> a, std::vector<double> b) {
    std::size_t n = std::max(a.size(), b.size());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pa += a[i];
        pb += b[i];
        if (pa < pb) return false;
    }
    return true;
}

double l2_tail(const std::vector<double>& sizes, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = k; i < sizes.size(); ++i) s += sizes[i] * sizes[i];
    return s;
}

std::vector<RankStats> component_spectrum(const SizeSample& sample, std::size_t k) {
    if (k < 1) throw DomainError("component_spectrum: k >= 1 required");
    if (sample.replicas.empty()) throw DomainError("component_spectrum: empty sample");
    std::vector<RankStats> out(k);
    std::vector<double> column(sample.replicas.size());
    for (std::size_t rank = 0; rank < k; ++rank) {
        double sum = 0.0;
        for (std::size_t r = 0; r < sample.replicas.size(); ++r) {
            const auto& v = sample.replicas[r];
            column[r] = rank < v.size() ? v[rank] : 0.0;
            sum += column[r];
        }
        std::sort(column.begin(), column.end());
        RankStats rs;
        rs.mean = sum / static_cast<double>(column.size());
        auto quantile = [&](double q) {
            double pos = q * static_cast<double>(column.size() - 1);
            std::size_t lo = static_cast<std::size_t>(pos);
            double frac = pos - static_cast<double>(lo);
            if (lo + 1 >= column.size()) return column.back();
            return column[lo] * (1.0 - frac) + column[lo + 1] * frac;
        };
        rs.median = quantile(0.5);
        for (int d = 1; d <= 9; ++d) rs.deciles[d - 1] = quantile(0.1 * d);
        out[rank] = rs;
    }
    return out;
}

namespace {

// Regularized incomplete gamma, series and continued-fraction branches.
double gamma_p_series(double s, double x) {
    double sum = 1.0 / s;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

} // namespace

double gamma_q(double s, double x) {
    if (s <= 0.0 || x < 0.0) throw DomainError("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chisq_uniform_pvalue(const std::vector<std::int64_t>& counts) {
    std::vector<double> probs(counts.size(), 1.0 / static_cast<double>(counts.size()));
    return chisq_pvalue(counts, probs);
}

double chisq_pvalue(const std::vector<std::int64_t>& counts, const std::vector<double>& probs) {
    if (counts.size() != probs.size() || counts.size() < 2)
        throw DomainError("chisq_pvalue: need matching categories, at least 2");
    double total = 0.0;
    for (std::int64_t c : counts) total += static_cast<double>(c);
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expected = total * probs[i];
        if (expected <= 0.0) throw DomainError("chisq_pvalue: zero expected cell");
        double diff = static_cast<double>(counts[i]) - expected;
        stat += diff * diff / expected;
    }
    double df = static_cast<double>(counts.size() - 1);
    return gamma_q(0.5 * df, 0.5 * stat);
}

double chisq_two_sample_pvalue(const std::vector<std::int64_t>& a,
                               const std::vector<std::int64_t>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw DomainError("chisq_two_sample_pvalue: need matching categories");
    double na = 0.0, nb = 0.0;
    for (std::int64_t c : a) na += static_cast<double>(c);
    for (std::int64_t c : b) nb += static_cast<double>(c);
    double stat = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double pooled = static_cast<double>(a[i] + b[i]);
        if (pooled == 0.0) continue;
        ++used;
        double ea = pooled * na / (na + nb);
        double eb = pooled * nb / (na + nb);
        double da = static_cast<double>(a[i]) - ea;
        double db = static_cast<double>(b[i]) - eb;
        stat += da * da / ea + db * db / eb;
    }
    if (used < 2) throw DomainError("chisq_two_sample_pvalue: fewer than 2 occupied categories");
    double df = static_cast<double>(used - 1);
    return gamma_q(0.5 * df, 0.5 * stat);
}

} // namespace crf
