#ifndef CRITFOREST_RNG_HPP
#define CRITFOREST_RNG_HPP

#include <cmath>
#include <cstdint>

namespace crf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding. All distributions are implemented
/// here rather than with <random> adaptors so that streams are bit-identical
/// across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        have_spare_ = false;
    }

    /// Child stream for replica `index`; independent of evaluation order, so
    /// ensembles are reproducible under any scheduling of replicas.
    static Rng child(std::uint64_t root_seed, std::uint64_t index) {
        std::uint64_t sm = root_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        std::uint64_t mixed = splitmix64(sm);
        return Rng(mixed ^ (index << 1));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1], safe as a log() argument.
    double u01_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection keeps it exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    /// Standard normal (Box-Muller; the spare is cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = u01_pos();
        double v = u01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Geometric gap for skip-sampling Bernoulli(p) slot sequences: the number
    /// of failures before the next success. Requires 0 < p < 1.
    std::uint64_t geometric_skip(double p) {
        double u = u01_pos();
        double g = std::floor(std::log(u) / std::log1p(-p));
        if (g > 9e18) g = 9e18;
        return static_cast<std::uint64_t>(g);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace crf

#endif
