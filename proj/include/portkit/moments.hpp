#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "portkit/fuzzy.hpp"
#include "portkit/quadrature.hpp"

namespace portkit {

// Integrand for the expectation engines. `hints` lists every point where
// monotonicity may change; when engaged (possibly empty for a monotone
// function) interval extrema are taken over endpoints and hints only.
struct Integrand {
    std::function<double(double)> eval;
    std::optional<std::vector<double>> hints;

    static Integrand identity() {
        return {[](double x) { return x; }, std::vector<double>{}};
    }
    static Integrand constant(double c) {
        return {[c](double) { return c; }, std::vector<double>{}};
    }
    // (x - center)^k, stationary at the center.
    static Integrand centered_power(double center, int k);
    // (shift + x)^j, stationary at -shift.
    static Integrand shifted_power(double shift, int j);
};

enum class Backend { choquet, distributional };

std::string to_string(Backend b);

struct MomentSet {
    double q = 0.0;
    double v = 0.0;
    double sk = 0.0;
    double ku = 0.0;
    Backend backend = Backend::choquet;
};

// Choquet-type expectation: integral of Cr(f(xi) >= t) over t > 0 minus
// the integral of Cr(f(xi) <= t) over t < 0, with level-set credibilities
// obtained by monotone bisection over membership levels.
double choquet_expectation(const FuzzyNumber& fv, const Integrand& f,
                           const QuadratureSpec& spec = {});

// Stieltjes expectation against the credibility distribution: piecewise
// density integrals plus jump terms.
double distributional_expectation(const FuzzyNumber& fv, const Integrand& f,
                                  const QuadratureSpec& spec = {});

double expectation(const FuzzyNumber& fv, const Integrand& f, Backend backend,
                   const QuadratureSpec& spec = {});

// Choquet expected value (identity integrand).
double expected_value(const FuzzyNumber& fv, const QuadratureSpec& spec = {});

double central_moment(const FuzzyNumber& fv, int k, Backend backend,
                      const QuadratureSpec& spec = {});
double skewness(const FuzzyNumber& fv, Backend backend,
                const QuadratureSpec& spec = {});
double kurtosis(const FuzzyNumber& fv, Backend backend,
                const QuadratureSpec& spec = {});

double shifted_raw_moment(const FuzzyNumber& centered, double shift, int j,
                          Backend backend, const QuadratureSpec& spec = {});

MomentSet moment_set(const FuzzyNumber& fv, Backend backend,
                     const QuadratureSpec& spec = {});

// Closed forms for a triangular fuzzy number under the Choquet backend.
// The skewness closed form is the corrected (c-a)^2(c+a-2b)/32; the
// as-printed variant (c-a)^2(c+a+2b)/32 fails shift invariance and is
// exposed separately for diagnostics.
MomentSet triangular_closed_moments(double a, double b, double c);
double triangular_skewness_printed(double a, double b, double c);

}  // namespace portkit
