#include "crf/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

#include "crf/errors.hpp"
#include "crf/logspace.hpp"

namespace crf {

ExplorationTrace explore(const Graph& g) {
    const std::int64_t n = g.n_vertices;
    auto adj = g.adjacency();
    ExplorationTrace tr;
    tr.n_vertices = n;
    tr.order.reserve(static_cast<std::size_t>(n));
    tr.stack_sizes.reserve(static_cast<std::size_t>(n) + 1);
    tr.stack_sizes.push_back(0);

    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<std::int32_t> stack; // FIFO: the earliest-seen vertex is processed next
    std::int32_t next_root = 0;

    for (std::int64_t step = 0; step < n; ++step) {
        std::int32_t v;
        if (stack.empty()) {
            while (seen[static_cast<std::size_t>(next_root)]) ++next_root;
            v = next_root;
            seen[static_cast<std::size_t>(v)] = true;
            tr.order.push_back(v);
        } else {
            v = stack.front();
            stack.pop_front();
        }
        for (std::int32_t w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                tr.order.push_back(w);
                stack.push_back(w);
            }
        }
        tr.stack_sizes.push_back(static_cast<std::int32_t>(stack.size()));
    }
    return tr;
}

void validate_trace(const ExplorationTrace& tr) {
    const std::int64_t n = tr.n_vertices;
    if (static_cast<std::int64_t>(tr.order.size()) != n ||
        static_cast<std::int64_t>(tr.stack_sizes.size()) != n + 1)
        throw DomainError("trace: wrong lengths");
    if (tr.stack_sizes.front() != 0 || tr.stack_sizes.back() != 0)
        throw DomainError("trace: Z_0 and Z_N must be 0");
    for (std::size_t i = 0; i + 1 < tr.stack_sizes.size(); ++i) {
        if (tr.stack_sizes[i] < 0) throw DomainError("trace: negative stack size");
        if (tr.stack_sizes[i + 1] - tr.stack_sizes[i] < -1)
            throw DomainError("trace: increment below -1");
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::int32_t v : tr.order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw DomainError("trace: order is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

std::vector<std::int64_t> excursion_lengths(const ExplorationTrace& tr) {
    validate_trace(tr);
    std::vector<std::int64_t> lengths;
    std::int64_t prev_zero = 0;
    for (std::int64_t i = 1; i <= tr.n_vertices; ++i) {
        if (tr.stack_sizes[static_cast<std::size_t>(i)] == 0) {
            lengths.push_back(i - prev_zero);
            prev_zero = i;
        }
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    return lengths;
}

double RescaledPath::value_at(double s) const {
    if (s < 0.0) throw DomainError("value_at: s < 0");
    std::size_t idx = static_cast<std::size_t>(std::floor(s / time_step));
    if (idx >= values.size()) idx = values.size() - 1;
    return values[idx];
}

RescaledPath rescale_trace(const std::vector<std::int32_t>& stack_prefix, std::int64_t n) {
    RescaledPath p;
    double nn = static_cast<double>(n);
    p.time_step = std::pow(nn, -2.0 / 3.0);
    p.space_scale = std::pow(nn, -1.0 / 3.0);
    p.values.reserve(stack_prefix.size());
    for (std::int32_t z : stack_prefix) p.values.push_back(p.space_scale * static_cast<double>(z));
    return p;
}

std::int64_t IncrementDistribution::sample_increment(Rng& rng) const {
    double u = rng.u01();
    double acc = 0.0;
    for (std::size_t l = 0; l < probs.size(); ++l) {
        acc += probs[l];
        if (u < acc) return static_cast<std::int64_t>(l) - 1;
    }
    return static_cast<std::int64_t>(probs.size()) - 2;
}

SeparatedProbCache::SeparatedProbCache(const AcyclicProbabilityProfile& profile, std::int64_t n_lo,
                                       std::int64_t n_hi, std::int64_t j_cap)
    : profile_(&profile), n_lo_(n_lo), n_hi_(n_hi), j_cap_(j_cap) {
    if (n_lo < 0 || n_hi < n_lo || n_hi > profile.max_vertices() || j_cap < 0)
        throw DomainError("SeparatedProbCache: bad block");
}

void SeparatedProbCache::prefill(int threads) {
    const std::size_t rows = static_cast<std::size_t>(n_hi_ - n_lo_ + 1);
    const std::size_t cols = static_cast<std::size_t>(j_cap_ + 1);
    block_.assign(rows * cols, 0.0);
    auto fill = [&](std::size_t row_lo, std::size_t row_hi) {
        for (std::size_t ri = row_lo; ri < row_hi; ++ri) {
            std::int64_t np = n_lo_ + static_cast<std::int64_t>(ri);
            for (std::size_t j = 0; j < cols; ++j) {
                std::int64_t jj = static_cast<std::int64_t>(j);
                block_[ri * cols + j] =
                    jj > np ? neg_inf : log_separated_prob(*profile_, np, jj);
            }
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        std::size_t chunk = (rows + static_cast<std::size_t>(threads) - 1) /
                            static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(rows, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(fill, lo, hi);
        }
        for (auto& th : pool) th.join();
    } else {
        fill(0, rows);
    }
    filled_ = true;
}

double SeparatedProbCache::log_separated(std::int64_t n_prime, std::int64_t j) const {
    if (filled_ && n_prime >= n_lo_ && n_prime <= n_hi_ && j <= j_cap_) {
        const std::size_t cols = static_cast<std::size_t>(j_cap_ + 1);
        return block_[static_cast<std::size_t>(n_prime - n_lo_) * cols +
                      static_cast<std::size_t>(j)];
    }
    if (j > n_prime) return neg_inf;
    return log_separated_prob(*profile_, n_prime, j);
}

IncrementDistribution transition_kernel(const SeparatedProbCache& cache, std::int64_t n_total,
                                        std::int64_t n, std::int64_t r) {
    const AcyclicProbabilityProfile& prof = cache.profile();
    if (n < 0 || n >= n_total) throw DomainError("transition_kernel: need 0 <= n < N");
    if (r < 0 || r > n_total - n) throw DomainError("transition_kernel: need 0 <= r <= N-n");
    if (n_total - 1 > prof.max_vertices())
        throw CapacityError("transition_kernel: profile does not cover N-1");
    const double p = prof.p();
    const std::int64_t r_eff = r >= 1 ? r : 1; // the r=0 law equals the r=1 law
    const std::int64_t m_slots = n_total - n - r_eff;
    const double logp = std::log(p);
    const double log1mp = std::log1p(-p);

    IncrementDistribution row;
    row.stack_size = r_eff;
    if (m_slots < 0) throw DomainError("transition_kernel: stack exceeds remaining vertices");

    // Binomial part, built incrementally; truncate once it is 40 nats below
    // its own maximum (past the mode).
    std::vector<double> log_terms;
    log_terms.reserve(32);
    double log_binom = static_cast<double>(m_slots) * log1mp; // l = 0
    double best_binom = log_binom;
    double tmax = neg_inf;
    for (std::int64_t l = 0; l <= m_slots; ++l) {
        if (l > 0) {
            log_binom += std::log(static_cast<double>(m_slots - l + 1) / static_cast<double>(l)) +
                         logp - log1mp;
        }
        if (log_binom > best_binom) best_binom = log_binom;
        if (log_binom < best_binom - 40.0 &&
            static_cast<double>(l) > static_cast<double>(m_slots) * p) {
            break;
        }
        double t = log_binom + cache.log_separated(n_total - n - 1, r_eff + l - 1);
        log_terms.push_back(t);
        if (t > tmax) tmax = t;
    }
    row.probs.resize(log_terms.size());
    double total = 0.0;
    for (std::size_t l = 0; l < log_terms.size(); ++l) {
        double e = log_terms[l] == neg_inf ? 0.0 : std::exp(log_terms[l] - tmax);
        row.probs[l] = e;
        total += e;
    }
    for (double& q : row.probs) q /= total;
    return row;
}

std::vector<std::int32_t> simulate_kernel_chain(const SeparatedProbCache& cache,
                                                std::int64_t n_total, std::int64_t horizon,
                                                Rng& rng) {
    if (horizon < 0 || horizon > n_total)
        throw DomainError("simulate_kernel_chain: need 0 <= horizon <= N");
    std::vector<std::int32_t> z(static_cast<std::size_t>(horizon) + 1, 0);
    for (std::int64_t n = 0; n < horizon; ++n) {
        std::int64_t r = z[static_cast<std::size_t>(n)];
        IncrementDistribution row = transition_kernel(cache, n_total, n, r);
        std::int64_t incr = row.sample_increment(rng);
        // The r = 0 row is the r = 1 row for the value Z_{n+1} = r_eff + l - 1.
        std::int64_t base = r >= 1 ? r : 1;
        std::int64_t next = base + incr;
        z[static_cast<std::size_t>(n + 1)] = static_cast<std::int32_t>(next);
    }
    return z;
}

double IncrementBin::se_scaled() const {
    double n = static_cast<double>(count);
    double mean = sum_scaled / n;
    double var = sum_scaled_sq / n - mean * mean;
    return std::sqrt(std::max(var, 0.0) / n);
}
double IncrementBin::se_sq() const {
    double n = static_cast<double>(count);
    double mean = sum_sq_incr / n;
    double var = sum_sq_incr_sq / n - mean * mean;
    return std::sqrt(std::max(var, 0.0) / n);
}

IncrementStats empirical_increment_stats(
    const std::vector<std::vector<std::int32_t>>& prefixes, std::int64_t n_total, double t_max,
    int time_bins, double b_max, int height_bins, double jump_delta,
    const std::function<double(double, double)>& predicted_drift) {
    if (prefixes.empty()) throw DomainError("empirical_increment_stats: empty ensemble");
    if (time_bins < 1 || height_bins < 1 || t_max <= 0 || b_max <= 0)
        throw DomainError("empirical_increment_stats: bad binning");
    IncrementStats st;
    st.time_bins = time_bins;
    st.height_bins = height_bins;
    st.t_max = t_max;
    st.b_max = b_max;
    st.jump_delta = jump_delta;
    st.bins.assign(static_cast<std::size_t>(time_bins * height_bins), IncrementBin{});
    st.sticky.assign(static_cast<std::size_t>(time_bins), StickyBin{});

    const double n13 = std::cbrt(static_cast<double>(n_total));
    const double n23 = n13 * n13;
    const double jump_cut = jump_delta * n13;

    for (const auto& z : prefixes) {
        for (std::size_t i = 0; i + 1 < z.size(); ++i) {
            double t = static_cast<double>(i) / n23;
            if (t >= t_max) break;
            int ti = static_cast<int>(t / t_max * time_bins);
            if (ti >= time_bins) ti = time_bins - 1;
            std::int32_t r = z[i];
            double d = static_cast<double>(z[i + 1] - z[i]);
            if (r == 0) {
                StickyBin& sb = st.sticky[static_cast<std::size_t>(ti)];
                sb.count += 1;
                double nz = static_cast<double>(z[i + 1]);
                sb.sum_sq_next += nz * nz;
                continue;
            }
            double b = static_cast<double>(r) / n13;
            if (b >= b_max) continue;
            int bi = static_cast<int>(b / b_max * height_bins);
            if (bi >= height_bins) bi = height_bins - 1;
            IncrementBin& bin = st.bins[static_cast<std::size_t>(ti * height_bins + bi)];
            double x = n13 * d;
            bin.count += 1;
            bin.sum_scaled += x;
            bin.sum_scaled_sq += x * x;
            bin.sum_sq_incr += d * d;
            bin.sum_sq_incr_sq += d * d * d * d;
            if (std::fabs(d) > jump_cut) bin.jump_count += 1;
            if (predicted_drift) bin.sum_predicted += predicted_drift(t, b);
            bin.sum_t += t;
            bin.sum_b += b;
        }
    }
    return st;
}

} // namespace crf
