#pragma once

#include <stdexcept>
#include <string>

namespace portkit {

// Invalid argument or out-of-domain input.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Division by a vanishing derivative / index (linear or quadratic utilities).
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested feature not supported by the chosen family (e.g. derivative order).
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Small-risk / portfolio model precondition violated.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature ran out of subdivision budget. Carries the best estimate so a
// caller can still inspect how far off it was.
struct NumericFailure : std::runtime_error {
    NumericFailure(const std::string& msg, double estimate, double bound)
        : std::runtime_error(msg), best_estimate(estimate), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

// Bad CLI / JSON configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace portkit
