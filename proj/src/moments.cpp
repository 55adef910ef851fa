#include "portkit/moments.hpp"

#include <algorithm>
#include <cmath>

namespace portkit {

Integrand Integrand::centered_power(double center, int k) {
    if (k < 1) throw DomainError("centered_power: k must be >= 1");
    return {[center, k](double x) { return std::pow(x - center, k); },
            std::vector<double>{center}};
}

Integrand Integrand::shifted_power(double shift, int j) {
    if (j < 1) throw DomainError("shifted_power: j must be >= 1");
    return {[shift, j](double x) { return std::pow(shift + x, j); },
            std::vector<double>{-shift}};
}

std::string to_string(Backend b) {
    return b == Backend::choquet ? "choquet" : "distributional";
}

namespace {

// sup{alpha : extremum of f over the alpha-cut reaches t}, by bisection on
// the membership level. `max_side` selects Pos(f >= t) vs Pos(f <= t).
double level_set_possibility(const FuzzyNumber& fv, const Integrand& f,
                             double t, bool max_side,
                             const QuadratureSpec& spec) {
    auto reaches = [&](const Interval& cut) {
        if (max_side)
            return interval_max(f.eval, cut.lo, cut.hi, f.hints) >= t;
        return interval_min(f.eval, cut.lo, cut.hi, f.hints) <= t;
    };
    const Interval support{fv.support_min(), fv.support_max()};
    if (!reaches(support)) return 0.0;
    if (reaches(fv.alpha_cut(1.0))) return 1.0;
    double lo = 0.0, hi = 1.0;  // reaches at lo, fails at hi
    while (hi - lo > spec.level_bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        (reaches(fv.alpha_cut(mid)) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double credibility_ge(const FuzzyNumber& fv, const Integrand& f, double t,
                      const QuadratureSpec& spec) {
    const double pos = level_set_possibility(fv, f, t, true, spec);
    const double pos_c = level_set_possibility(fv, f, t, false, spec);
    return 0.5 * (pos + 1.0 - pos_c);
}

double credibility_le(const FuzzyNumber& fv, const Integrand& f, double t,
                      const QuadratureSpec& spec) {
    const double pos = level_set_possibility(fv, f, t, false, spec);
    const double pos_c = level_set_possibility(fv, f, t, true, spec);
    return 0.5 * (pos + 1.0 - pos_c);
}

// Candidate kinks of t -> Cr(f >= t): f at membership breakpoints and at
// the integrand's own stationary points.
std::vector<double> level_splits(const FuzzyNumber& fv, const Integrand& f) {
    std::vector<double> out;
    for (const auto& p : fv.breakpoints()) out.push_back(f.eval(p.x));
    if (f.hints)
        for (double h : *f.hints)
            if (h >= fv.support_min() && h <= fv.support_max())
                out.push_back(f.eval(h));
    return out;
}

}  // namespace

double choquet_expectation(const FuzzyNumber& fv, const Integrand& f,
                           const QuadratureSpec& spec) {
    spec.validate();
    const double lo = fv.support_min();
    const double hi = fv.support_max();
    const double fmax = interval_max(f.eval, lo, hi, f.hints);
    const double fmin = interval_min(f.eval, lo, hi, f.hints);
    const auto splits = level_splits(fv, f);
    double result = 0.0;
    if (fmax > 0.0) {
        result += integrate(
            [&](double t) { return credibility_ge(fv, f, t, spec); }, 0.0,
            fmax, splits, spec);
    }
    if (fmin < 0.0) {
        result -= integrate(
            [&](double t) { return credibility_le(fv, f, t, spec); }, fmin,
            0.0, splits, spec);
    }
    return result;
}

double distributional_expectation(const FuzzyNumber& fv, const Integrand& f,
                                  const QuadratureSpec& spec) {
    spec.validate();
    const auto nodes = fv.distribution_polyline();
    const std::vector<double> hints =
        f.hints ? *f.hints : std::vector<double>{};
    double result = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        result += (nodes[i].phi_plus - nodes[i].phi_minus) * f.eval(nodes[i].x);
        if (i + 1 < nodes.size()) {
            const double dx = nodes[i + 1].x - nodes[i].x;
            const double density =
                (nodes[i + 1].phi_minus - nodes[i].phi_plus) / dx;
            if (density != 0.0)
                result += density * integrate(f.eval, nodes[i].x,
                                              nodes[i + 1].x, hints, spec);
        }
    }
    return result;
}

double expectation(const FuzzyNumber& fv, const Integrand& f, Backend backend,
                   const QuadratureSpec& spec) {
    return backend == Backend::choquet
               ? choquet_expectation(fv, f, spec)
               : distributional_expectation(fv, f, spec);
}

double expected_value(const FuzzyNumber& fv, const QuadratureSpec& spec) {
    return choquet_expectation(fv, Integrand::identity(), spec);
}

double central_moment(const FuzzyNumber& fv, int k, Backend backend,
                      const QuadratureSpec& spec) {
    if (k < 1) throw DomainError("central_moment: k must be >= 1");
    const double e = expected_value(fv, spec);
    return expectation(fv, Integrand::centered_power(e, k), backend, spec);
}

double skewness(const FuzzyNumber& fv, Backend backend,
                const QuadratureSpec& spec) {
    return central_moment(fv, 3, backend, spec);
}

double kurtosis(const FuzzyNumber& fv, Backend backend,
                const QuadratureSpec& spec) {
    return central_moment(fv, 4, backend, spec);
}

double shifted_raw_moment(const FuzzyNumber& centered, double shift, int j,
                          Backend backend, const QuadratureSpec& spec) {
    if (j < 1) throw DomainError("shifted_raw_moment: j must be >= 1");
    return expectation(centered, Integrand::shifted_power(shift, j), backend,
                       spec);
}

MomentSet moment_set(const FuzzyNumber& fv, Backend backend,
                     const QuadratureSpec& spec) {
    MomentSet m;
    m.backend = backend;
    m.q = expected_value(fv, spec);
    m.v = expectation(fv, Integrand::centered_power(m.q, 2), backend, spec);
    m.sk = expectation(fv, Integrand::centered_power(m.q, 3), backend, spec);
    m.ku = expectation(fv, Integrand::centered_power(m.q, 4), backend, spec);
    return m;
}

MomentSet triangular_closed_moments(double a, double b, double c) {
    if (!(a <= b && b <= c))
        throw DomainError("triangular_closed_moments: requires a <= b <= c");
    MomentSet m;
    m.backend = Backend::choquet;
    m.q = (a + 2.0 * b + c) / 4.0;
    const double al = std::max(b - a, c - b);
    const double de = std::min(b - a, c - b);
    if (al == 0.0) return m;  // crisp point
    m.v = (33.0 * al * al * al + 21.0 * al * al * de + 11.0 * al * de * de -
           de * de * de) /
          (384.0 * al);
    m.sk = (c - a) * (c - a) * (c + a - 2.0 * b) / 32.0;
    const double al2 = al * al, de2 = de * de;
    m.ku = (253.0 * al2 * al2 * al + 395.0 * al2 * al2 * de +
            290.0 * al2 * al * de2 + 70.0 * al2 * de2 * de +
            17.0 * al * de2 * de2 - de2 * de2 * de) /
           (10240.0 * al);
    return m;
}

double triangular_skewness_printed(double a, double b, double c) {
    return (c - a) * (c - a) * (c + a + 2.0 * b) / 32.0;
}

}  // namespace portkit
