#ifndef CRITFOREST_ERRORS_HPP
#define CRITFOREST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crf {

/// Bad argument (out-of-range index, invalid probability, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A precomputed table does not cover the requested size.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A retry/subdivision budget was exhausted. Carries the attempt count.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, long long attempts)
        : std::runtime_error(what + " (attempts=" + std::to_string(attempts) + ")"),
          attempts(attempts) {}
    long long attempts;
};

/// A quadrature could not reach the requested tolerance. Carries the best
/// estimate and the error bound actually achieved.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double achieved_bound)
        : std::runtime_error(what), best_estimate(best_estimate), achieved_bound(achieved_bound) {}
    double best_estimate;
    double achieved_bound;
};

} // namespace crf

#endif
