#ifndef CRITFOREST_VERIFY_CRITERIA_HPP
#define CRITFOREST_VERIFY_CRITERIA_HPP

// The acceptance checklist: every numbered check the build must satisfy,
// runnable one at a time (ctest) or in tiers (the `verify` subcommand).

#include <cstdint>
#include <string>
#include <vector>

namespace crf::verify {

struct VerifyOptions {
    int threads = 2;
    std::uint64_t seed = 20250808;
    std::string cache_dir = "."; // where the drift interpolation table is cached
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string tier; // small | medium | large
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs one criterion (1-based id).
CriterionResult run_criterion(int id, const VerifyOptions& opts);

/// Criterion ids belonging to a tier, cumulatively: small < medium < large.
/// "all" (or "large") runs everything.
std::vector<int> criteria_for_tier(const std::string& tier);

/// One pass/fail line, as printed by the acceptance binary and `verify`.
std::string format_result_line(const CriterionResult& r);

} // namespace crf::verify

#endif
