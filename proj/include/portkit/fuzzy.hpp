#pragma once

#include <limits>
#include <vector>

#include "portkit/errors.hpp"

namespace portkit {

// Interval with endpoints that may be +/-infinity. Endpoints are closed by
// default; complements of closed events carry open finite boundaries, which
// matters only where the membership function jumps.
struct Interval {
    double lo;
    double hi;
    bool lo_open = false;
    bool hi_open = false;

    bool empty() const {
        return lo > hi || (lo == hi && (lo_open || hi_open));
    }
    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && lo_open) return false;
        if (x == hi && hi_open) return false;
        return true;
    }

    static Interval whole_line() {
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
    static Interval at_most(double x) {
        return {-std::numeric_limits<double>::infinity(), x};
    }
    static Interval at_least(double x) {
        return {x, std::numeric_limits<double>::infinity()};
    }
};

// Finite union of disjoint intervals, sorted by left endpoint.
// Construction canonicalizes: sorts and merges overlapping/touching parts.
class Event {
  public:
    Event() = default;
    explicit Event(std::vector<Interval> intervals);

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    // Exact set complement; finite boundary points flip openness, so
    // complement() is an involution and no point lies in both an event and
    // its complement.
    Event complement() const;

    static Event whole_line() { return Event({Interval::whole_line()}); }

  private:
    std::vector<Interval> intervals_;
};

struct Breakpoint {
    double x;
    double level;
};

// One node of the credibility distribution polyline: the value just left of
// x, and the (right-continuous) value at x. phi_plus - phi_minus is the
// jump mass carried by x.
struct DistributionNode {
    double x;
    double phi_minus;
    double phi_plus;
};

// Normal, quasi-concave, compact-support piecewise-linear membership
// function. Breakpoint x-coordinates are nondecreasing; an equal-x pair
// encodes a vertical jump (degenerate triangulars). Membership is the upper
// envelope of the polyline and zero outside the support.
class FuzzyNumber {
  public:
    explicit FuzzyNumber(std::vector<Breakpoint> breakpoints);

    static FuzzyNumber triangular(double a, double b, double c);
    static FuzzyNumber point(double c);

    const std::vector<Breakpoint>& breakpoints() const { return points_; }
    double support_min() const { return points_.front().x; }
    double support_max() const { return points_.back().x; }

    double membership(double x) const;

    // {x : membership(x) >= alpha}, alpha in (0, 1]; a single closed
    // interval by quasi-concavity, computed exactly from the linear pieces.
    Interval alpha_cut(double alpha) const;

    double possibility(const Event& ev) const;
    double necessity(const Event& ev) const;

    // Cr(A) = (Pos(A) + 1 - Pos(A^C)) / 2.
    double credibility(const Event& ev) const;

    // Phi(x) = Cr(xi <= x).
    double distribution(double x) const;

    // Fuzzy number of a*xi + b.
    FuzzyNumber shift_scale(double a, double b) const;

    // Phi as a polyline with explicit jumps; nodes at every distinct
    // breakpoint x, linear in between.
    std::vector<DistributionNode> distribution_polyline() const;

  private:
    // One-sided limits of the membership function; they differ from
    // membership(x) only at vertical jumps (degenerate shapes).
    double limit_from_left(double x) const;
    double limit_from_right(double x) const;

    std::vector<Breakpoint> points_;
};

}  // namespace portkit
