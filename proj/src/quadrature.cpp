#include "portkit/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace portkit {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    double tol;  // absolute tolerance for the current piece
    int budget;
    double partial = 0.0;
    double slack = 0.0;  // unconverged error swallowed at the depth cap

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        // At the depth cap the subinterval is ~2^-48 of the piece; accept
        // and book the residual (a jump at a single point lands here with
        // a negligible contribution, and slack is audited by the caller).
        if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
            if (depth <= 0) slack += std::abs(delta);
            double v = left + right + delta / 15.0;
            partial += v;
            return v;
        }
        if (--budget < 0) {
            double best = left + right + delta / 15.0;
            throw NumericFailure("integrate: subdivision budget exhausted",
                                 partial + best, std::abs(delta));
        }
        // Child tolerances halve so the piece total stays within tol.
        const double saved = tol;
        tol = 0.5 * saved;
        double vl = recurse(a, m, fa, flm, fm, left, depth - 1);
        double vr = recurse(m, b, fm, frm, fb, right, depth - 1);
        tol = saved;
        return vl + vr;
    }
};

double simpson_piece(const std::function<double(double)>& f, double a, double b,
                     double tol, int budget) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    SimpsonState st{f, tol, budget};
    const double v = st.recurse(a, b, fa, fm, fb, whole, 48);
    if (st.slack > tol)
        throw NumericFailure("integrate: integrand too rough at depth limit",
                             v, st.slack);
    return v;
}

double golden_refine(const std::function<double(double)>& f, double a, double b,
                     double sign) {
    // Maximizes sign*f on [a, b]; returns the extremal sign*f value.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = sign * f(x1);
    double f2 = sign * f(x2);
    for (int i = 0; i < 80 && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sign * f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sign * f(x1);
        }
    }
    return std::max(f1, f2);
}

double interval_extremum(const std::function<double(double)>& f, double lo,
                         double hi,
                         const std::optional<std::vector<double>>& candidates,
                         double sign) {
    double best = std::max(sign * f(lo), sign * f(hi));
    if (candidates) {
        for (double c : *candidates)
            if (c > lo && c < hi) best = std::max(best, sign * f(c));
        return sign * best;
    }
    // Hint-free fallback: coarse grid, then local golden-section refinement
    // around the best sample.
    const int n = 64;
    int besti = -1;
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = sign * f(x);
        if (v > best) {
            best = v;
            besti = i;
        }
    }
    if (besti >= 0) {
        const double a = lo + (hi - lo) * (besti - 1) / n;
        const double b = lo + (hi - lo) * (besti + 1) / n;
        best = std::max(best, golden_refine(f, a, b, sign));
    }
    return sign * best;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& splits, const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> knots{a, b};
    for (double s : splits)
        if (s > a && s < b) knots.push_back(s);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    // Rough scale for the relative part of the tolerance.
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double m = 0.5 * (knots[i] + knots[i + 1]);
        scale += std::abs(f(m)) * (knots[i + 1] - knots[i]);
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * scale);

    double total = 0.0;
    const int pieces = static_cast<int>(knots.size()) - 1;
    for (int i = 0; i < pieces; ++i) {
        const double piece_tol =
            tol * (knots[i + 1] - knots[i]) / (b - a);
        total += simpson_piece(f, knots[i], knots[i + 1], piece_tol,
                               spec.max_subdivisions / pieces);
    }
    return sign * total;
}

double interval_max(const std::function<double(double)>& f, double lo, double hi,
                    const std::optional<std::vector<double>>& candidates) {
    if (lo > hi) throw DomainError("interval_max: empty interval");
    return interval_extremum(f, lo, hi, candidates, 1.0);
}

double interval_min(const std::function<double(double)>& f, double lo, double hi,
                    const std::optional<std::vector<double>>& candidates) {
    if (lo > hi) throw DomainError("interval_min: empty interval");
    return interval_extremum(f, lo, hi, candidates, -1.0);
}

}  // namespace portkit
