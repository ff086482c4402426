#pragma once

// Hand-rolled random generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "nsratio/profile.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::vector<double> random_knots(Rng& rng, int interior) {
    std::vector<double> x{0.0, 1.0};
    for (int i = 0; i < interior; ++i) x.push_back(uniform(rng, 0.02, 0.98));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end(), [](double a, double b) { return b - a < 1e-3; }), x.end());
    x.back() = 1.0;
    return x;
}

// Minimum of a few affine functions that are nonnegative on [0,1], sampled at
// random knots: concave and nonnegative by construction. With `floor` > 0 every
// line stays above floor at both ends, so the profile is strictly positive.
inline nsratio::ProfileH random_concave(Rng& rng, double floor = 0.0) {
    const int lines = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<std::pair<double, double>> ab;
    for (int k = 0; k < lines; ++k) {
        double y0 = uniform(rng, 0.0, 2.0), y1 = uniform(rng, 0.0, 2.0);
        if (floor == 0.0 && uniform(rng, 0.0, 1.0) < 0.2) y0 = 0.0;
        if (floor == 0.0 && uniform(rng, 0.0, 1.0) < 0.2) y1 = 0.0;
        if (y0 == 0.0 && y1 == 0.0) y1 = uniform(rng, 0.1, 2.0);
        y0 = std::max(y0, floor);
        y1 = std::max(y1, floor);
        ab.emplace_back(y0, y1 - y0);
    }
    // a tent-like line pair keeps interior maxima common
    const double peak = uniform(rng, 0.1, 0.9);
    const double top = uniform(rng, 0.5, 3.0);
    const double lo = floor;
    ab.emplace_back(lo, (top - lo) / peak);
    ab.emplace_back(lo + (top - lo) / (1.0 - peak), -(top - lo) / (1.0 - peak));

    auto knots = random_knots(rng, std::uniform_int_distribution<int>(0, 8)(rng));
    knots.push_back(peak);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(), [](double a, double b) { return b - a < 1e-3; }),
                knots.end());
    knots.front() = 0.0;
    knots.back() = 1.0;
    std::vector<double> v;
    for (double x : knots) {
        double m = 1e300;
        for (auto [a, b] : ab) m = std::min(m, a + b * x);
        v.push_back(std::max(m, 0.0));
    }
    return nsratio::normalize(nsratio::ProfileH(knots, v));
}

}  // namespace gen
