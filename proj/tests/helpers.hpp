#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "portkit/fuzzy.hpp"

namespace portkit::testing {

inline FuzzyNumber random_triangular(std::mt19937& rng, double span = 2.0) {
    std::uniform_real_distribution<double> u(0.05, span);
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    const double a = shift(rng);
    const double b = a + u(rng);
    const double c = b + u(rng);
    return FuzzyNumber::triangular(a, b, c);
}

// Piecewise-linear fuzzy number with several rising and falling pieces.
inline FuzzyNumber random_polyline(std::mt19937& rng) {
    std::uniform_real_distribution<double> step(0.1, 1.0);
    std::uniform_real_distribution<double> lvl(0.05, 0.95);
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    const int rising = 1 + static_cast<int>(rng() % 3);
    const int falling = 1 + static_cast<int>(rng() % 3);
    std::vector<double> up(rising - 1), down(falling - 1);
    for (auto& v : up) v = lvl(rng);
    for (auto& v : down) v = lvl(rng);
    std::sort(up.begin(), up.end());
    std::sort(down.begin(), down.end(), std::greater<>());
    std::vector<Breakpoint> pts;
    double x = shift(rng);
    pts.push_back({x, 0.0});
    for (double v : up) pts.push_back({x += step(rng), v});
    pts.push_back({x += step(rng), 1.0});
    for (double v : down) pts.push_back({x += step(rng), v});
    pts.push_back({x += step(rng), 0.0});
    return FuzzyNumber(std::move(pts));
}

inline Event random_event(std::mt19937& rng) {
    std::uniform_real_distribution<double> pos(-4.0, 4.0);
    std::uniform_real_distribution<double> len(0.0, 2.0);
    std::vector<Interval> ivs;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
        const double lo = pos(rng);
        ivs.push_back({lo, lo + len(rng)});
    }
    if (rng() % 4 == 0) ivs.push_back(Interval::at_most(pos(rng)));
    if (rng() % 4 == 0) ivs.push_back(Interval::at_least(pos(rng)));
    return Event(std::move(ivs));
}

}  // namespace portkit::testing
