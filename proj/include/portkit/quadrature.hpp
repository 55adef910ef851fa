#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "portkit/errors.hpp"

namespace portkit {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 1 << 16;
    double level_bisection_tol = 1e-12;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions <= 0 ||
            !(level_bisection_tol > 0.0))
            throw DomainError("QuadratureSpec: all fields must be positive");
    }
};

// Breakpoint-aware adaptive Simpson over [a, b]. `splits` lists interior
// points where the integrand may kink; each smooth piece gets its own
// budget share. Throws NumericFailure when the subdivision budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& splits, const QuadratureSpec& spec);

// Maximum/minimum of f over [lo, hi]. When `candidates` is engaged the
// extremum is assumed to lie at an endpoint or a listed stationary point
// (exact for piecewise-monotone f with full hints); otherwise a sampled
// grid with golden-section refinement is used.
double interval_max(const std::function<double(double)>& f, double lo, double hi,
                    const std::optional<std::vector<double>>& candidates);
double interval_min(const std::function<double(double)>& f, double lo, double hi,
                    const std::optional<std::vector<double>>& candidates);

}  // namespace portkit
