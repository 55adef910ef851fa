#pragma once

#include <map>
#include <optional>
#include <vector>

#include "portkit/fuzzy.hpp"
#include "portkit/moments.hpp"
#include "portkit/utility.hpp"

namespace portkit {

// One risk-free and one fuzzy risky asset. w is the future wealth of the
// all-risk-free strategy, zeta the excess return.
struct PortfolioProblem {
    double w0;
    double r;
    FuzzyNumber risky;

    double wealth() const { return w0 * (1.0 + r); }
    FuzzyNumber excess_return() const { return risky.shift_scale(1.0, -r); }
};

// zeta = k*mu + xi with Q(xi) = 0. mu is fixed to Q(zeta) of the base
// scenario so the sweep multiplier k scales the drift directly (k=1 base).
struct SmallRiskDecomposition {
    double k = 1.0;
    double mu = 0.0;
    FuzzyNumber noise;

    double kmu() const { return k * mu; }
    FuzzyNumber zeta() const { return noise.shift_scale(1.0, kmu()); }
    SmallRiskDecomposition at(double k_mult) const { return {k_mult, mu, noise}; }
};

SmallRiskDecomposition decompose_small_risk(const FuzzyNumber& zeta,
                                            const QuadratureSpec& spec = {});

// V(alpha) = integral of u(w + alpha x) dPhi_zeta(x) and its derivative.
double total_utility(const UtilityFunction& u, double w,
                     const FuzzyNumber& zeta, double alpha,
                     const QuadratureSpec& spec = {});
double total_utility_derivative(const UtilityFunction& u, double w,
                                const FuzzyNumber& zeta, double alpha,
                                const QuadratureSpec& spec = {});

// Largest alpha interval keeping w + alpha*x strictly inside the utility
// domain for every support point x, shrunk by a small safety margin and
// clipped to [-limit, limit].
Interval feasible_bracket(const UtilityFunction& u, double w,
                          const FuzzyNumber& zeta, double limit = 1e6);

struct ExactSolution {
    double alpha = 0.0;
    bool boundary = false;       // no stationary point inside the bracket
    double v_prime = 0.0;        // V'(alpha) at the returned point
    double stationarity_scale = 1.0;
};

ExactSolution exact_allocation(const UtilityFunction& u, double w,
                               const FuzzyNumber& zeta, Interval bracket,
                               const QuadratureSpec& spec = {},
                               double stationarity_tol = 1e-9);

// Coefficients of the Taylor-truncated first-order condition
// sum_j u^(j+1)(w)/j! * M_{j+1} * alpha^j = 0 with M_j the shifted raw
// moments of the centered noise, plus the real root nearest zero.
struct FocPolynomial {
    std::vector<double> coeffs;  // c_0 .. c_n
    double root = 0.0;
    bool root_found = false;
    Backend backend = Backend::distributional;
};

FocPolynomial foc_taylor_polynomial(const UtilityFunction& u, double w,
                                    const SmallRiskDecomposition& risk, int n,
                                    Backend backend,
                                    const QuadratureSpec& spec = {});

// Small-risk closed-form approximations of the optimal allocation.
double approx_allocation_order1(const MomentSet& m, const RiskIndices& idx);
double approx_allocation_order2(const MomentSet& m, const RiskIndices& idx);

struct Order3Options {
    // Evaluate the skewness-squared term with a Q/V^5 factor instead of
    // Q^3/V^5 (comparison knob; the default follows the correct algebra).
    bool printed_sk2_variant = false;
    // Evaluate the kurtosis term with coefficient t*p instead of t/p
    // (the derivative ratio u''''/u'' equals t*p; comparison knob).
    bool derivative_ratio_kurtosis = false;
};

double approx_allocation_order3(const MomentSet& m, const RiskIndices& idx,
                                const Order3Options& opts = {});

// Closed expression for HARA utility and a triangular excess return. The
// skewness input is the corrected closed form; the value obtained from the
// as-printed skewness is reported alongside.
struct HaraTriangularAllocation {
    double alpha = 0.0;
    double alpha_with_printed_skewness = 0.0;
};

HaraTriangularAllocation hara_triangular_allocation(double a, double b,
                                                    double c, double eta,
                                                    double gamma, double w);

struct AllocationReport {
    double w = 0.0;
    double kmu = 0.0;
    ExactSolution exact;
    MomentSet moments_distributional;
    MomentSet moments_choquet;
    std::optional<RiskIndices> indices;  // absent for singular utilities
    // order -> approximation, per moment backend; absent entries are
    // singular for the given utility.
    std::map<int, std::optional<double>> alpha_order_distributional;
    std::map<int, std::optional<double>> alpha_order_choquet;
    std::map<int, double> foc_roots;  // truncation n -> root, distributional
    double order3_printed_sk2 = 0.0;
    double order3_derivative_ratio_kurt = 0.0;
};

AllocationReport solve_report(const UtilityFunction& u, double w,
                              const FuzzyNumber& zeta,
                              const QuadratureSpec& spec = {},
                              double stationarity_tol = 1e-9);

struct SweepRow {
    double k = 0.0;
    double kmu = 0.0;
    double alpha_exact = 0.0;
    std::optional<double> alpha_1, alpha_2, alpha_3;
    std::optional<double> err_1, err_2, err_3;
    Backend backend = Backend::distributional;
    double foc_root_3 = 0.0;
};

std::vector<SweepRow> run_sweep(const UtilityFunction& u, double w,
                                const FuzzyNumber& zeta_base,
                                const std::vector<double>& k_multipliers,
                                Backend moment_backend,
                                const QuadratureSpec& spec = {},
                                double stationarity_tol = 1e-9);

// Least-squares slope of log(err) against log(k); the convergence order.
double log_log_slope(const std::vector<double>& k,
                     const std::vector<double>& err);

}  // namespace portkit
