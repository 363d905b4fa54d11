#include "crf/drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

#include "crf/errors.hpp"
#include "crf/quadrature.hpp"

namespace crf {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double g_value(double x, const DriftEvalConfig& cfg, const StableDensityTable* gt) {
    return gt ? (*gt)(x) : eval_g(x, cfg.quad);
}

// Upper end of the a-integrals: g's left tail falls like exp(-(a-lambda)^3/6),
// so beyond this point the integrand has dropped at least 60 nats and keeps
// falling.
double a_cutoff(double lambda) {
    double l3 = lambda * lambda * lambda;
    return std::max(lambda - std::cbrt(l3 - 360.0), 0.5);
}

} // namespace

double eval_J(int k, double b, double lambda, const DriftEvalConfig& cfg,
              const StableDensityTable* gt) {
    if (k != 1 && k != 3 && k != 5) throw DomainError("eval_J: k must be 1, 3 or 5");
    if (!(b > 0.0)) throw DomainError("eval_J: requires b > 0");
    const double split = cfg.split_point > 0.0 ? cfg.split_point : std::max(b * b, 0.5);
    const double half_b2 = 0.5 * b * b;

    // Direct piece on [split, a_hi].
    const double a_hi = std::max(a_cutoff(lambda), split + 1.0);
    auto f_direct = [&](double a) {
        double inv_sq = 1.0 / std::sqrt(a);
        double pw = inv_sq; // a^{-1/2}
        if (k >= 3) pw *= inv_sq * inv_sq;
        if (k == 5) pw *= inv_sq * inv_sq;
        return pw * g_value(lambda - a, cfg, gt) * std::exp(-half_b2 / a);
    };
    // J spans hundreds of orders of magnitude across lambda, so convergence
    // is judged relatively; the zero floor is safe because an identically
    // underflowed integrand yields a zero error estimate.
    double upper = integrate_adaptive_rel(f_direct, split, a_hi, 0.0, cfg.rel_tol,
                                          cfg.quad.max_subdivisions);

    // Substituted piece: a = b^2/(2u) maps (0, split] to [u_lo, inf), removing
    // the essential singularity at a = 0:
    //   Int = (b^2/2)^{1-k/2} Int u^{k/2-2} g(lambda - b^2/2u) e^{-u} du.
    // Taken in s = log u, since u spans many decades when b is small and the
    // power-law left end would otherwise hide between quadrature nodes.
    const double u_lo = half_b2 / split;
    const double u_hi = std::max(u_lo * 1.5, u_lo + 60.0);
    const double expo = 0.5 * static_cast<double>(k) - 1.0; // u^{k/2-2} du = u^{k/2-1} ds
    auto f_sub = [&](double s) {
        double u = std::exp(s);
        return std::pow(u, expo) * g_value(lambda - half_b2 / u, cfg, gt) * std::exp(-u);
    };
    double lower = std::pow(half_b2, 1.0 - 0.5 * static_cast<double>(k)) *
                   integrate_adaptive_rel(f_sub, std::log(u_lo), std::log(u_hi), 0.0,
                                          cfg.rel_tol, cfg.quad.max_subdivisions);
    return upper + lower;
}

double eval_alpha(double b, double lambda, const DriftEvalConfig& cfg,
                  const StableDensityTable* gt) {
    return eval_J(1, b, lambda, cfg, gt) / eval_J(3, b, lambda, cfg, gt);
}

double alpha_partial_b(double b, double lambda, const DriftEvalConfig& cfg,
                       const StableDensityTable* gt) {
    double j1 = eval_J(1, b, lambda, cfg, gt);
    double j3 = eval_J(3, b, lambda, cfg, gt);
    double j5 = eval_J(5, b, lambda, cfg, gt);
    return b * j1 * j5 / (j3 * j3) - b;
}

GammaLimits gamma_limits(double lambda, const DriftEvalConfig& cfg, const StableDensityTable* gt) {
    // g1 = Int a^{-1/2} g(lambda - a) da; a = v^2 removes the root singularity.
    double v_hi = std::sqrt(a_cutoff(lambda));
    auto f = [&](double v) { return 2.0 * g_value(lambda - v * v, cfg, gt); };
    double g1 = integrate_adaptive_rel(f, 0.0, v_hi, 0.0, cfg.rel_tol,
                                       cfg.quad.max_subdivisions);
    double g_at = g_value(lambda, cfg, gt);
    GammaLimits out;
    out.g1 = g1;
    out.g3 = std::sqrt(2.0) * g_at * kSqrtPi;              // Gamma(1/2) = sqrt(pi)
    out.g5 = 2.0 * std::sqrt(2.0) * g_at * 0.5 * kSqrtPi;  // Gamma(3/2) = sqrt(pi)/2
    return out;
}

AlphaTable AlphaTable::build(const GridSpec& spec, const DriftEvalConfig& cfg, int threads) {
    if (spec.b_max <= 0 || spec.b_step <= 0 || spec.lambda_step <= 0 ||
        spec.lambda_max <= spec.lambda_min)
        throw DomainError("AlphaTable: bad grid spec");
    AlphaTable t;
    t.spec_ = spec;
    t.cfg_ = cfg;
    t.gtable_ = make_drift_gtable();
    t.nb_ = static_cast<std::size_t>(std::llround(spec.b_max / spec.b_step)) + 1;
    t.nl_ = static_cast<std::size_t>(std::llround((spec.lambda_max - spec.lambda_min) /
                                                  spec.lambda_step)) +
            1;
    t.values_.assign(t.nb_ * t.nl_, 0.0);

    auto fill = [&](std::size_t li_lo, std::size_t li_hi) {
        for (std::size_t li = li_lo; li < li_hi; ++li) {
            double lam = spec.lambda_min + spec.lambda_step * static_cast<double>(li);
            for (std::size_t bi = 1; bi < t.nb_; ++bi) { // b = 0 stays 0
                double b = spec.b_step * static_cast<double>(bi);
                t.values_[li * t.nb_ + bi] = eval_alpha(b, lam, cfg, t.gtable_.get());
            }
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        std::size_t chunk = (t.nl_ + threads - 1) / static_cast<std::size_t>(threads);
        for (int ti = 0; ti < threads; ++ti) {
            std::size_t lo = static_cast<std::size_t>(ti) * chunk;
            std::size_t hi = std::min(t.nl_, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(fill, lo, hi);
        }
        for (auto& th : pool) th.join();
    } else {
        fill(0, t.nl_);
    }
    return t;
}

namespace {

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double c = -0.5 * p0 + 0.5 * p2;
    return ((a * t + b) * t + c) * t + p1;
}

} // namespace

double AlphaTable::alpha(double b, double lambda) const {
    if (b == 0.0) return 0.0;
    if (b < 0.0) throw DomainError("alpha: b < 0");
    if (b > spec_.b_max || lambda < spec_.lambda_min || lambda > spec_.lambda_max)
        return eval_alpha(b, lambda, cfg_, gtable_.get());

    double ub = b / spec_.b_step;
    double ul = (lambda - spec_.lambda_min) / spec_.lambda_step;
    std::ptrdiff_t bi = static_cast<std::ptrdiff_t>(ub);
    std::ptrdiff_t li = static_cast<std::ptrdiff_t>(ul);
    if (bi > static_cast<std::ptrdiff_t>(nb_) - 2) bi = static_cast<std::ptrdiff_t>(nb_) - 2;
    if (li > static_cast<std::ptrdiff_t>(nl_) - 2) li = static_cast<std::ptrdiff_t>(nl_) - 2;
    double tb = ub - static_cast<double>(bi);
    double tl = ul - static_cast<double>(li);

    auto clamp_b = [&](std::ptrdiff_t i) {
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, nb_ - 1));
    };
    auto clamp_l = [&](std::ptrdiff_t i) {
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, nl_ - 1));
    };
    double col[4];
    for (int dl = -1; dl <= 2; ++dl) {
        std::size_t L = clamp_l(li + dl);
        col[dl + 1] = catmull_rom(node(clamp_b(bi - 1), L), node(clamp_b(bi), L),
                                  node(clamp_b(bi + 1), L), node(clamp_b(bi + 2), L), tb);
    }
    double v = catmull_rom(col[0], col[1], col[2], col[3], tl);
    return v > 0.0 ? v : 0.0;
}

namespace {

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr char kAlphaMagic[8] = {'C', 'R', 'F', 'A', 'L', 'P', 'H', '2'};

} // namespace

void AlphaTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("AlphaTable::save: cannot open " + path);
    out.write(kAlphaMagic, 8);
    double header[5] = {spec_.b_max, spec_.b_step, spec_.lambda_min, spec_.lambda_max,
                        spec_.lambda_step};
    std::uint64_t dims[2] = {nb_, nl_};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    std::uint64_t checksum =
        fnv1a64(reinterpret_cast<const unsigned char*>(values_.data()),
                values_.size() * sizeof(double));
    out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

AlphaTable AlphaTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("AlphaTable::load: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kAlphaMagic, 8) != 0)
        throw DomainError("AlphaTable::load: bad magic");
    double header[5];
    std::uint64_t dims[2];
    std::uint64_t checksum;
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    in.read(reinterpret_cast<char*>(&checksum), sizeof(checksum));
    AlphaTable t;
    t.spec_ = {header[0], header[1], header[2], header[3], header[4]};
    t.nb_ = dims[0];
    t.nl_ = dims[1];
    if (t.nb_ == 0 || t.nl_ == 0 || t.nb_ * t.nl_ > (1ULL << 28))
        throw DomainError("AlphaTable::load: implausible dimensions");
    t.values_.resize(t.nb_ * t.nl_);
    in.read(reinterpret_cast<char*>(t.values_.data()),
            static_cast<std::streamsize>(t.values_.size() * sizeof(double)));
    if (!in) throw DomainError("AlphaTable::load: truncated file");
    std::uint64_t actual = fnv1a64(reinterpret_cast<const unsigned char*>(t.values_.data()),
                                   t.values_.size() * sizeof(double));
    if (actual != checksum) throw DomainError("AlphaTable::load: checksum mismatch");
    t.cfg_ = DriftEvalConfig{};
    t.gtable_ = make_drift_gtable();
    return t;
}

std::shared_ptr<const StableDensityTable> make_drift_gtable() {
    // Arguments reaching g are lambda - a with a in (0, a_cutoff]; for the
    // supported lambda range that is within [-21, 8].
    static std::shared_ptr<const StableDensityTable> shared = [] {
        QuadratureConfig cfg;
        cfg.abs_tol = 1e-11;
        cfg.truncation_tail = 1e-13;
        return std::make_shared<const StableDensityTable>(-21.0, 8.5, 2e-3, cfg);
    }();
    return shared;
}

} // namespace crf
