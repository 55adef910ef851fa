#include "portkit/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace portkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(UtilityFamily f) {
    switch (f) {
        case UtilityFamily::hara: return "hara";
        case UtilityFamily::crra: return "crra";
        case UtilityFamily::cara: return "cara";
        case UtilityFamily::linear: return "linear";
    }
    return "?";
}

UtilityFunction::UtilityFunction(UtilityFamily family, double p0, double p1,
                                 double p2)
    : family_(family), p0_(p0), p1_(p1), p2_(p2) {
    switch (family_) {
        case UtilityFamily::hara:
            domain_lo_ = -p1_ * p2_;  // eta + w/gamma > 0, gamma > 0
            domain_hi_ = kInf;
            break;
        case UtilityFamily::crra:
            domain_lo_ = 0.0;
            domain_hi_ = kInf;
            break;
        default:
            domain_lo_ = -kInf;
            domain_hi_ = kInf;
    }
    check_shape();
}

UtilityFunction UtilityFunction::hara(double theta, double eta, double gamma) {
    if (theta == 0.0) throw DomainError("hara: theta must be nonzero");
    if (!(gamma > 0.0) || gamma == 1.0)
        throw DomainError("hara: gamma must be positive and != 1");
    // Only the sign of theta*(1-gamma) decides monotonicity; the indices do
    // not see theta at all. Normalize the sign so u is increasing.
    if (theta * (1.0 - gamma) < 0.0) theta = -theta;
    return UtilityFunction(UtilityFamily::hara, theta, eta, gamma);
}

UtilityFunction UtilityFunction::crra(double a) {
    if (!(a < 1.0) || a == 0.0)
        throw DomainError("crra: exponent must satisfy a < 1, a != 0");
    return UtilityFunction(UtilityFamily::crra, a, 0.0, 0.0);
}

UtilityFunction UtilityFunction::cara(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("cara: lambda must be positive");
    return UtilityFunction(UtilityFamily::cara, lambda, 0.0, 0.0);
}

UtilityFunction UtilityFunction::linear(double slope) {
    if (!(slope > 0.0)) throw DomainError("linear: slope must be positive");
    return UtilityFunction(UtilityFamily::linear, slope, 0.0, 0.0);
}

double UtilityFunction::derivative(double w, int order) const {
    if (order < 0) throw CapabilityError("derivative: negative order");
    if (!in_domain(w)) throw DomainError("derivative: w outside utility domain");
    switch (family_) {
        case UtilityFamily::hara: {
            const double x = p1_ + w / p2_;
            if (order == 0) return p0_ * std::pow(x, 1.0 - p2_);
            double coeff = p0_;
            for (int i = 0; i < order; ++i) coeff *= (1.0 - p2_ - i) / p2_;
            return coeff * std::pow(x, 1.0 - p2_ - order);
        }
        case UtilityFamily::crra: {
            const double a = p0_;
            if (order == 0) return std::pow(w, a) / a;
            double coeff = 1.0;
            for (int i = 1; i < order; ++i) coeff *= (a - i);
            return coeff * std::pow(w, a - order);
        }
        case UtilityFamily::cara: {
            const double lam = p0_;
            const double e = std::exp(-lam * w);
            if (order == 0) return -e / lam;
            return -std::pow(-lam, order) * e / lam;
        }
        case UtilityFamily::linear:
            if (order == 0) return p0_ * w;
            return order == 1 ? p0_ : 0.0;
    }
    return 0.0;
}

double UtilityFunction::arrow_pratt(double w) const {
    const double u1 = derivative(w, 1);
    if (u1 == 0.0) throw SingularityError("arrow_pratt: u'(w) = 0");
    return -derivative(w, 2) / u1;
}

double UtilityFunction::prudence(double w) const {
    const double u2 = derivative(w, 2);
    if (u2 == 0.0) throw SingularityError("prudence: u''(w) = 0");
    return -derivative(w, 3) / u2;
}

double UtilityFunction::temperance(double w) const {
    const double u3 = derivative(w, 3);
    if (u3 == 0.0) throw SingularityError("temperance: u'''(w) = 0");
    return -derivative(w, 4) / u3;
}

RiskIndices UtilityFunction::indices(double w) const {
    return {arrow_pratt(w), prudence(w), temperance(w), w};
}

void UtilityFunction::check_shape() const {
    // Concavity/monotonicity guard on a grid over a probe window.
    const double lo = std::max(domain_lo_, -10.0);
    const double hi = std::min(domain_hi_, std::max(10.0, lo + 10.0));
    const int n = 1000;
    for (int i = 1; i <= n; ++i) {
        const double w = lo + (hi - lo) * i / (n + 1);
        if (!(derivative(w, 1) > 0.0))
            throw DomainError("utility: u' must be positive on the domain");
        if (derivative(w, 2) > 1e-12)
            throw DomainError("utility: u'' must be nonpositive on the domain");
    }
}

double finite_difference_index(const UtilityFunction& u, double w,
                               IndexKind which, double h) {
    if (!(h > 0.0)) throw DomainError("finite_difference_index: h <= 0");
    if (!u.in_domain(w - 2.0 * h) || !u.in_domain(w + 2.0 * h))
        throw DomainError("finite_difference_index: step leaves the domain");
    const double f_2 = u.value(w - 2.0 * h);
    const double f_1 = u.value(w - h);
    const double f0 = u.value(w);
    const double f1 = u.value(w + h);
    const double f2 = u.value(w + 2.0 * h);
    const double d1 = (f1 - f_1) / (2.0 * h);
    const double d2 = (f1 - 2.0 * f0 + f_1) / (h * h);
    const double d3 = (f2 - 2.0 * f1 + 2.0 * f_1 - f_2) / (2.0 * h * h * h);
    const double d4 = (f2 - 4.0 * f1 + 6.0 * f0 - 4.0 * f_1 + f_2) /
                      (h * h * h * h);
    switch (which) {
        case IndexKind::risk_aversion: return -d2 / d1;
        case IndexKind::prudence: return -d3 / d2;
        case IndexKind::temperance: return -d4 / d3;
    }
    return 0.0;
}

}  // namespace portkit
