#include "portkit/fuzzy.hpp"

#include <algorithm>
#include <cmath>

namespace portkit {

Event::Event(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) {
        if (std::isnan(iv.lo) || std::isnan(iv.hi))
            throw DomainError("Event: NaN interval endpoint");
        if (iv.lo > iv.hi) throw DomainError("Event: empty interval (lo > hi)");
    }
    // Single-point intervals with an open endpoint are empty sets.
    intervals.erase(std::remove_if(intervals.begin(), intervals.end(),
                                   [](const Interval& iv) { return iv.empty(); }),
                    intervals.end());
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) {
                  if (a.lo != b.lo) return a.lo < b.lo;
                  return !a.lo_open && b.lo_open;
              });
    for (const auto& iv : intervals) {
        if (!intervals_.empty()) {
            Interval& cur = intervals_.back();
            // Merge on overlap, or when touching unless both sides exclude
            // the shared point.
            const bool touches = iv.lo < cur.hi ||
                                 (iv.lo == cur.hi && !(cur.hi_open && iv.lo_open));
            if (touches) {
                if (iv.lo == cur.lo) cur.lo_open = cur.lo_open && iv.lo_open;
                if (iv.hi > cur.hi) {
                    cur.hi = iv.hi;
                    cur.hi_open = iv.hi_open;
                } else if (iv.hi == cur.hi) {
                    cur.hi_open = cur.hi_open && iv.hi_open;
                }
                continue;
            }
        }
        intervals_.push_back(iv);
    }
}

Event Event::complement() const {
    const double inf = std::numeric_limits<double>::infinity();
    if (intervals_.empty()) return whole_line();
    std::vector<Interval> gaps;
    if (intervals_.front().lo > -inf)
        gaps.push_back(
            {-inf, intervals_.front().lo, false, !intervals_.front().lo_open});
    for (std::size_t i = 0; i + 1 < intervals_.size(); ++i)
        gaps.push_back({intervals_[i].hi, intervals_[i + 1].lo,
                        !intervals_[i].hi_open, !intervals_[i + 1].lo_open});
    if (intervals_.back().hi < inf)
        gaps.push_back(
            {intervals_.back().hi, inf, !intervals_.back().hi_open, false});
    return Event(std::move(gaps));
}

FuzzyNumber::FuzzyNumber(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
    if (points_.empty()) throw DomainError("FuzzyNumber: no breakpoints");
    double peak = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.x)) throw DomainError("FuzzyNumber: non-finite x");
        if (p.level < 0.0 || p.level > 1.0)
            throw DomainError("FuzzyNumber: level outside [0,1]");
        if (i > 0 && p.x < points_[i - 1].x)
            throw DomainError("FuzzyNumber: x-coordinates must be nondecreasing");
        peak = std::max(peak, p.level);
    }
    if (peak != 1.0) throw DomainError("FuzzyNumber: max level must be 1");
    // Quasi-concavity: levels nondecreasing up to the peak, nonincreasing after.
    std::size_t i = 1;
    while (i < points_.size() && points_[i].level >= points_[i - 1].level) ++i;
    for (; i < points_.size(); ++i)
        if (points_[i].level > points_[i - 1].level)
            throw DomainError("FuzzyNumber: membership is not quasi-concave");
    if (points_.size() > 1 || points_.front().level != 1.0) {
        if (points_.front().level != 0.0 || points_.back().level != 0.0)
            throw DomainError(
                "FuzzyNumber: membership must vanish at the support boundary");
    }
}

FuzzyNumber FuzzyNumber::triangular(double a, double b, double c) {
    if (!(a <= b && b <= c))
        throw DomainError("triangular: requires a <= b <= c");
    if (a == b && b == c) return point(b);
    std::vector<Breakpoint> pts;
    pts.push_back({a, 0.0});
    pts.push_back({b, 1.0});
    pts.push_back({c, 0.0});
    return FuzzyNumber(std::move(pts));
}

FuzzyNumber FuzzyNumber::point(double c) {
    return FuzzyNumber({Breakpoint{c, 1.0}});
}

double FuzzyNumber::membership(double x) const {
    if (x < support_min() || x > support_max()) return 0.0;
    // Upper envelope: at a shared x take the max level.
    double best = -1.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].x == x) best = std::max(best, points_[i].level);
    }
    if (best >= 0.0) return best;
    auto it = std::upper_bound(
        points_.begin(), points_.end(), x,
        [](double v, const Breakpoint& p) { return v < p.x; });
    const Breakpoint& hi = *it;
    const Breakpoint& lo = *(it - 1);
    const double t = (x - lo.x) / (hi.x - lo.x);
    return lo.level + t * (hi.level - lo.level);
}

Interval FuzzyNumber::alpha_cut(double alpha) const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha_cut: alpha must be in (0,1]");
    // Leftmost x with membership >= alpha.
    std::size_t j = 0;
    while (points_[j].level < alpha) ++j;
    double lo;
    if (j == 0 || points_[j].x == points_[j - 1].x) {
        lo = points_[j].x;
    } else {
        const auto& p = points_[j - 1];
        const auto& q = points_[j];
        lo = p.x + (alpha - p.level) / (q.level - p.level) * (q.x - p.x);
    }
    std::size_t k = points_.size() - 1;
    while (points_[k].level < alpha) --k;
    double hi;
    if (k == points_.size() - 1 || points_[k].x == points_[k + 1].x) {
        hi = points_[k].x;
    } else {
        const auto& p = points_[k];
        const auto& q = points_[k + 1];
        hi = p.x + (alpha - p.level) / (q.level - p.level) * (q.x - p.x);
    }
    // Lerp roundoff near alpha = 1 can cross the endpoints by one ulp.
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    return {lo, hi};
}

double FuzzyNumber::limit_from_left(double x) const {
    if (x <= support_min() || x > support_max()) return 0.0;
    auto it = std::lower_bound(
        points_.begin(), points_.end(), x,
        [](const Breakpoint& p, double v) { return p.x < v; });
    // First breakpoint of a shared-x group carries the entry level.
    if (it != points_.end() && it->x == x) return it->level;
    return membership(x);
}

double FuzzyNumber::limit_from_right(double x) const {
    if (x < support_min() || x >= support_max()) return 0.0;
    auto it = std::upper_bound(
        points_.begin(), points_.end(), x,
        [](double v, const Breakpoint& p) { return v < p.x; });
    // Last breakpoint of a shared-x group carries the exit level.
    if ((it - 1)->x == x) return (it - 1)->level;
    return membership(x);
}

double FuzzyNumber::possibility(const Event& ev) const {
    double sup = 0.0;
    for (const auto& iv : ev.intervals()) {
        double lo = iv.lo;
        double hi = iv.hi;
        bool lo_open = iv.lo_open;
        bool hi_open = iv.hi_open;
        if (lo < support_min()) {
            lo = support_min();
            lo_open = false;
        }
        if (hi > support_max()) {
            hi = support_max();
            hi_open = false;
        }
        if (lo > hi || (lo == hi && (lo_open || hi_open))) continue;
        sup = std::max(sup, lo_open ? limit_from_right(lo) : membership(lo));
        if (hi > lo)
            sup = std::max(sup, hi_open ? limit_from_left(hi) : membership(hi));
        for (const auto& p : points_)
            if (p.x > lo && p.x < hi) sup = std::max(sup, p.level);
        if (sup == 1.0) break;
    }
    return sup;
}

double FuzzyNumber::necessity(const Event& ev) const {
    return 1.0 - possibility(ev.complement());
}

double FuzzyNumber::credibility(const Event& ev) const {
    return 0.5 * (possibility(ev) + 1.0 - possibility(ev.complement()));
}

double FuzzyNumber::distribution(double x) const {
    return credibility(Event({Interval::at_most(x)}));
}

FuzzyNumber FuzzyNumber::shift_scale(double a, double b) const {
    if (a == 0.0) return point(b);
    std::vector<Breakpoint> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back({a * p.x + b, p.level});
    if (a < 0.0) std::reverse(pts.begin(), pts.end());
    return FuzzyNumber(std::move(pts));
}

std::vector<DistributionNode> FuzzyNumber::distribution_polyline() const {
    // Collapse breakpoints sharing an x into (x, entry level, exit level, max).
    struct Group {
        double x;
        double entry;
        double exit;
        double upper;
    };
    std::vector<Group> groups;
    for (const auto& p : points_) {
        if (!groups.empty() && groups.back().x == p.x) {
            groups.back().exit = p.level;
            groups.back().upper = std::max(groups.back().upper, p.level);
        } else {
            groups.push_back({p.x, p.level, p.level, p.level});
        }
    }
    std::size_t peak_start = 0, peak_end = 0;
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (groups[i].upper == 1.0) {
            peak_end = i;
            if (groups[peak_start].upper != 1.0) peak_start = i;
        }
    std::vector<DistributionNode> nodes;
    nodes.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double before = (i == 0) ? 0.0 : groups[i].entry;
        const double after = (i + 1 == groups.size()) ? 0.0 : groups[i].exit;
        DistributionNode n{groups[i].x, 0.0, 0.0};
        if (i < peak_start) {
            n.phi_minus = 0.5 * before;
            n.phi_plus = 0.5 * groups[i].upper;
        } else if (i == peak_start) {
            n.phi_minus = 0.5 * before;
            n.phi_plus = (peak_end > i) ? 0.5 : 1.0 - 0.5 * after;
        } else {
            n.phi_minus = 1.0 - 0.5 * before;
            n.phi_plus = 1.0 - 0.5 * after;
        }
        nodes.push_back(n);
    }
    return nodes;
}

}  // namespace portkit
