#pragma once

#include <string>

#include "portkit/errors.hpp"

namespace portkit {

enum class UtilityFamily { hara, crra, cara, linear };

std::string to_string(UtilityFamily f);

struct RiskIndices {
    double r = 0.0;  // Arrow-Pratt absolute risk aversion -u''/u'
    double p = 0.0;  // prudence -u'''/u''
    double t = 0.0;  // temperance -u''''/u'''
    double evaluated_at = 0.0;
};

// Increasing concave utility with exact analytic derivatives of arbitrary
// order. Families:
//   hara:   u(w) = theta (eta + w/gamma)^(1-gamma), eta + w/gamma > 0
//   crra:   u(w) = w^a / a, w > 0, a < 1, a != 0
//   cara:   u(w) = -exp(-lambda w)/lambda, lambda > 0
//   linear: u(w) = slope * w, slope > 0
class UtilityFunction {
  public:
    static UtilityFunction hara(double theta, double eta, double gamma);
    static UtilityFunction crra(double a);
    static UtilityFunction cara(double lambda);
    static UtilityFunction linear(double slope);

    UtilityFamily family() const { return family_; }

    // Open interval where u is defined and increasing.
    double domain_min() const { return domain_lo_; }
    double domain_max() const { return domain_hi_; }
    bool in_domain(double w) const { return w > domain_lo_ && w < domain_hi_; }

    double value(double w) const { return derivative(w, 0); }
    double derivative(double w, int order) const;

    double arrow_pratt(double w) const;
    double prudence(double w) const;
    double temperance(double w) const;
    RiskIndices indices(double w) const;

  private:
    UtilityFunction(UtilityFamily family, double p0, double p1, double p2);
    void check_shape() const;

    UtilityFamily family_;
    double p0_, p1_, p2_;  // family parameters, see factories
    double domain_lo_, domain_hi_;
};

// Central finite-difference estimate of an index; test oracle.
enum class IndexKind { risk_aversion, prudence, temperance };
double finite_difference_index(const UtilityFunction& u, double w,
                               IndexKind which, double h);

}  // namespace portkit
