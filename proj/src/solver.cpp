#include "portkit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace portkit {

SmallRiskDecomposition decompose_small_risk(const FuzzyNumber& zeta,
                                            const QuadratureSpec& spec) {
    const double q = expected_value(zeta, spec);
    if (!(q > 0.0))
        throw ModelError(
            "decompose_small_risk: Q(zeta) must be positive, got " +
            std::to_string(q));
    return {1.0, q, zeta.shift_scale(1.0, -q)};
}

namespace {

void check_alpha_domain(const UtilityFunction& u, double w,
                        const FuzzyNumber& zeta, double alpha) {
    for (double x : {zeta.support_min(), zeta.support_max()}) {
        if (!u.in_domain(w + alpha * x))
            throw DomainError("total_utility: w + alpha*x leaves the utility "
                              "domain at support point x = " +
                              std::to_string(x));
    }
}

}  // namespace

double total_utility(const UtilityFunction& u, double w,
                     const FuzzyNumber& zeta, double alpha,
                     const QuadratureSpec& spec) {
    check_alpha_domain(u, w, zeta, alpha);
    Integrand f{[&u, w, alpha](double x) { return u.value(w + alpha * x); },
                std::vector<double>{}};
    return distributional_expectation(zeta, f, spec);
}

double total_utility_derivative(const UtilityFunction& u, double w,
                                const FuzzyNumber& zeta, double alpha,
                                const QuadratureSpec& spec) {
    check_alpha_domain(u, w, zeta, alpha);
    Integrand f{
        [&u, w, alpha](double x) { return x * u.derivative(w + alpha * x, 1); },
        std::nullopt};
    return distributional_expectation(zeta, f, spec);
}

namespace {

double total_utility_second_derivative(const UtilityFunction& u, double w,
                                       const FuzzyNumber& zeta, double alpha,
                                       const QuadratureSpec& spec) {
    Integrand f{[&u, w, alpha](double x) {
                    return x * x * u.derivative(w + alpha * x, 2);
                },
                std::nullopt};
    return distributional_expectation(zeta, f, spec);
}

}  // namespace

Interval feasible_bracket(const UtilityFunction& u, double w,
                          const FuzzyNumber& zeta, double limit) {
    double lo = -limit, hi = limit;
    for (double x : {zeta.support_min(), zeta.support_max()}) {
        if (x == 0.0) {
            if (!u.in_domain(w))
                throw DomainError("feasible_bracket: w outside utility domain");
            continue;
        }
        // w + alpha*x in (dlo, dhi)  <=>  alpha between the two bounds.
        const double b1 = (u.domain_min() - w) / x;
        const double b2 = (u.domain_max() - w) / x;
        lo = std::max(lo, std::min(b1, b2));
        hi = std::min(hi, std::max(b1, b2));
    }
    const double margin = 1e-9 * (hi - lo);
    lo += margin;
    hi -= margin;
    if (!(lo < hi))
        throw DomainError("feasible_bracket: empty feasible alpha range");
    return {lo, hi};
}

ExactSolution exact_allocation(const UtilityFunction& u, double w,
                               const FuzzyNumber& zeta, Interval bracket,
                               const QuadratureSpec& spec,
                               double stationarity_tol) {
    if (bracket.empty())
        throw DomainError("exact_allocation: empty bracket");

    auto vp = [&](double a) {
        return total_utility_derivative(u, w, zeta, a, spec);
    };
    ExactSolution sol;
    const double ref = std::clamp(0.0, bracket.lo, bracket.hi);
    const double fref = vp(ref);
    sol.stationarity_scale = std::max(1.0, std::abs(fref));
    const double tol = stationarity_tol * sol.stationarity_scale;

    // V is concave, so V' is nonincreasing: bracket a sign change by
    // geometric expansion away from the reference point. Starting small
    // keeps utilities like CARA away from the huge bracket endpoints,
    // where exp would overflow, unless the optimum really lives there.
    if (std::abs(fref) <= tol) {
        sol.alpha = ref;
        sol.v_prime = fref;
        return sol;
    }
    const double dir = fref > 0.0 ? 1.0 : -1.0;
    const double edge = dir > 0.0 ? bracket.hi : bracket.lo;
    double a_prev = ref, f_prev = fref;
    double step = 1e-3;
    double a_next = ref, f_next = fref;
    // Probes close to the feasibility edge can defeat the quadrature (the
    // integrand steepens without bound as the wealth argument approaches
    // the utility domain boundary); pull such probes back toward the last
    // good point instead of failing outright.
    double probe_cap = edge;
    while (true) {
        a_next = ref + dir * step;
        if ((dir > 0.0 && a_next >= probe_cap) ||
            (dir < 0.0 && a_next <= probe_cap))
            a_next = probe_cap;
        try {
            f_next = vp(a_next);
        } catch (const NumericFailure&) {
            if (std::abs(a_next - a_prev) <=
                1e-12 * (1.0 + std::abs(a_prev))) {
                sol.alpha = a_prev;
                sol.v_prime = f_prev;
                sol.boundary = true;
                return sol;
            }
            probe_cap = a_next;
            step = std::abs(0.5 * (a_prev + a_next) - ref);
            continue;
        }
        if (std::abs(f_next) <= tol) {
            sol.alpha = a_next;
            sol.v_prime = f_next;
            return sol;
        }
        if (f_next * dir < 0.0) break;  // sign change bracketed
        if (a_next == probe_cap) {
            sol.alpha = a_next;
            sol.v_prime = f_next;
            sol.boundary = true;
            return sol;
        }
        a_prev = a_next;
        f_prev = f_next;
        step *= 2.0;
    }
    (void)f_prev;
    double lo = std::min(a_prev, a_next), hi = std::max(a_prev, a_next);
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = vp(mid);
        if (std::abs(fm) <= tol) {
            lo = hi = mid;
            break;
        }
        (fm > 0.0 ? lo : hi) = mid;
    }
    double a = 0.5 * (lo + hi);
    double fa = vp(a);
    // Newton polish on V'.
    for (int i = 0; i < 12 && std::abs(fa) > 0.1 * tol; ++i) {
        const double d = total_utility_second_derivative(u, w, zeta, a, spec);
        if (d == 0.0) break;
        const double next = std::clamp(a - fa / d, bracket.lo, bracket.hi);
        if (next == a) break;
        a = next;
        fa = vp(a);
    }
    sol.alpha = a;
    sol.v_prime = fa;
    return sol;
}

FocPolynomial foc_taylor_polynomial(const UtilityFunction& u, double w,
                                    const SmallRiskDecomposition& risk, int n,
                                    Backend backend,
                                    const QuadratureSpec& spec) {
    if (n < 1) throw DomainError("foc_taylor_polynomial: n must be >= 1");
    FocPolynomial poly;
    poly.backend = backend;
    double fact = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) fact *= j;
        const double mj =
            shifted_raw_moment(risk.noise, risk.kmu(), j + 1, backend, spec);
        poly.coeffs.push_back(u.derivative(w, j + 1) / fact * mj);
    }
    if (n == 1) {
        // Linear equation, solved exactly.
        if (poly.coeffs[1] == 0.0)
            throw SingularityError("foc_taylor_polynomial: zero linear term");
        poly.root = -poly.coeffs[0] / poly.coeffs[1];
        poly.root_found = true;
        return poly;
    }
    auto eval = [&](double a, double& deriv) {
        double v = 0.0, d = 0.0;
        for (int j = n; j >= 0; --j) {
            d = d * a + v;
            v = v * a + poly.coeffs[j];
        }
        deriv = d;
        return v;
    };
    double scale = 0.0;
    for (double c : poly.coeffs) scale = std::max(scale, std::abs(c));
    double a = 0.0;
    for (int i = 0; i < 200; ++i) {
        double d;
        const double v = eval(a, d);
        if (std::abs(v) <= 1e-15 * scale) {
            poly.root = a;
            poly.root_found = true;
            return poly;
        }
        if (d == 0.0) break;
        double step = -v / d;
        // Safeguard: damp runaway steps.
        const double cap = 1.0 + std::abs(a);
        if (std::abs(step) > cap) step = std::copysign(cap, step);
        a += step;
        if (!std::isfinite(a) || std::abs(a) > 1e12) break;
    }
    poly.root = a;
    poly.root_found = false;
    return poly;
}

namespace {

void require_regular(const MomentSet& m, const RiskIndices& idx) {
    if (!(m.v > 0.0))
        throw SingularityError("approximation: zero variance");
    if (idx.r == 0.0)
        throw SingularityError("approximation: zero risk aversion");
}

}  // namespace

double approx_allocation_order1(const MomentSet& m, const RiskIndices& idx) {
    require_regular(m, idx);
    return m.q / (idx.r * m.v);
}

double approx_allocation_order2(const MomentSet& m, const RiskIndices& idx) {
    require_regular(m, idx);
    const double v3 = m.v * m.v * m.v;
    return approx_allocation_order1(m, idx) +
           0.5 * idx.p / (idx.r * idx.r) * m.sk / v3 * m.q * m.q;
}

double approx_allocation_order3(const MomentSet& m, const RiskIndices& idx,
                                const Order3Options& opts) {
    require_regular(m, idx);
    if (idx.p == 0.0 && !opts.derivative_ratio_kurtosis)
        throw SingularityError("approximation: zero prudence");
    const double r = idx.r, p = idx.p, t = idx.t;
    const double q = m.q, v = m.v, sk = m.sk, ku = m.ku;
    const double q3 = q * q * q;
    const double v2 = v * v;
    const double v4 = v2 * v2;
    const double v5 = v4 * v;
    double corr = -q3 / (r * v2) + 1.5 * p / (r * r) * q3 / v2;
    corr += 0.5 * (p * p) / (r * r * r) *
            (opts.printed_sk2_variant ? q : q3) * sk * sk / v5;
    const double kurt_coeff =
        opts.derivative_ratio_kurtosis ? (t * p) : (t / p);
    corr -= (1.0 / 6.0) * kurt_coeff / (r * r * r) * q3 * ku / v4;
    return approx_allocation_order2(m, idx) + corr;
}

HaraTriangularAllocation hara_triangular_allocation(double a, double b,
                                                    double c, double eta,
                                                    double gamma, double w) {
    if (!(a <= b && b <= c))
        throw DomainError("hara_triangular_allocation: requires a <= b <= c");
    if (!(eta + w / gamma > 0.0))
        throw DomainError("hara_triangular_allocation: eta + w/gamma <= 0");
    const MomentSet m = triangular_closed_moments(a, b, c);
    if (!(m.v > 0.0))
        throw SingularityError("hara_triangular_allocation: zero variance");
    const double inv_r = eta + w / gamma;
    const double p_over_r2 = (gamma + 1.0) / gamma * inv_r;
    const double v3 = m.v * m.v * m.v;
    auto alpha_for = [&](double sk) {
        return inv_r * m.q / m.v + 0.5 * p_over_r2 * sk / v3 * m.q * m.q;
    };
    return {alpha_for(m.sk), alpha_for(triangular_skewness_printed(a, b, c))};
}

AllocationReport solve_report(const UtilityFunction& u, double w,
                              const FuzzyNumber& zeta,
                              const QuadratureSpec& spec,
                              double stationarity_tol) {
    AllocationReport rep;
    rep.w = w;
    rep.moments_distributional =
        moment_set(zeta, Backend::distributional, spec);
    rep.moments_choquet = moment_set(zeta, Backend::choquet, spec);
    rep.kmu = rep.moments_distributional.q;
    rep.exact = exact_allocation(u, w, zeta, feasible_bracket(u, w, zeta),
                                 spec, stationarity_tol);
    try {
        rep.indices = u.indices(w);
    } catch (const SingularityError&) {
        rep.indices.reset();
    }
    auto fill = [&](const MomentSet& m,
                    std::map<int, std::optional<double>>& out) {
        for (int order : {1, 2, 3}) {
            try {
                if (!rep.indices) throw SingularityError("singular indices");
                switch (order) {
                    case 1: out[order] = approx_allocation_order1(m, *rep.indices); break;
                    case 2: out[order] = approx_allocation_order2(m, *rep.indices); break;
                    default: out[order] = approx_allocation_order3(m, *rep.indices); break;
                }
            } catch (const SingularityError&) {
                out[order] = std::nullopt;
            }
        }
    };
    fill(rep.moments_distributional, rep.alpha_order_distributional);
    fill(rep.moments_choquet, rep.alpha_order_choquet);
    if (rep.indices) {
        const auto& m = rep.moments_distributional;
        try {
            rep.order3_printed_sk2 = approx_allocation_order3(
                m, *rep.indices, {.printed_sk2_variant = true});
            rep.order3_derivative_ratio_kurt = approx_allocation_order3(
                m, *rep.indices, {.derivative_ratio_kurtosis = true});
        } catch (const SingularityError&) {
        }
        if (rep.kmu > 0.0) {
            const SmallRiskDecomposition risk = decompose_small_risk(zeta, spec);
            for (int n : {1, 2, 3}) {
                const auto poly = foc_taylor_polynomial(
                    u, w, risk, n, Backend::distributional, spec);
                if (poly.root_found) rep.foc_roots[n] = poly.root;
            }
        }
    }
    return rep;
}

std::vector<SweepRow> run_sweep(const UtilityFunction& u, double w,
                                const FuzzyNumber& zeta_base,
                                const std::vector<double>& k_multipliers,
                                Backend moment_backend,
                                const QuadratureSpec& spec,
                                double stationarity_tol) {
    const SmallRiskDecomposition base = decompose_small_risk(zeta_base, spec);
    std::vector<SweepRow> rows;
    rows.reserve(k_multipliers.size());
    for (double k : k_multipliers) {
        if (!(k > 0.0)) throw DomainError("run_sweep: k multipliers must be positive");
        const SmallRiskDecomposition risk = base.at(k);
        const FuzzyNumber zeta = risk.zeta();
        SweepRow row;
        row.k = k;
        row.kmu = risk.kmu();
        row.backend = moment_backend;
        row.alpha_exact =
            exact_allocation(u, w, zeta, feasible_bracket(u, w, zeta), spec,
                             stationarity_tol)
                .alpha;
        MomentSet m = moment_set(zeta, moment_backend, spec);
        try {
            const RiskIndices idx = u.indices(w);
            row.alpha_1 = approx_allocation_order1(m, idx);
            row.alpha_2 = approx_allocation_order2(m, idx);
            row.alpha_3 = approx_allocation_order3(m, idx);
            row.err_1 = std::abs(row.alpha_exact - *row.alpha_1);
            row.err_2 = std::abs(row.alpha_exact - *row.alpha_2);
            row.err_3 = std::abs(row.alpha_exact - *row.alpha_3);
        } catch (const SingularityError&) {
        }
        row.foc_root_3 =
            foc_taylor_polynomial(u, w, risk, 3, moment_backend, spec).root;
        rows.push_back(row);
    }
    return rows;
}

double log_log_slope(const std::vector<double>& k,
                     const std::vector<double>& err) {
    if (k.size() != err.size() || k.size() < 2)
        throw DomainError("log_log_slope: need >= 2 matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double x = std::log(k[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace portkit
