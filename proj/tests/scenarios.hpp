#pragma once

// Shared scenario builders for the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "debond/forward.hpp"
#include "debond/model.hpp"

namespace debond::testing {

inline SolverConfig solver(double h, double T, Scheme scheme = Scheme::heun) {
    SolverConfig cfg;
    cfg.h = h;
    cfg.T = T;
    cfg.scheme = scheme;
    return cfg;
}

inline InitialState kicked(double y1 = 2.0, double ell0 = 1.0) {
    return InitialState(ell0, SampledFunction::constant(0.0, 0.0, ell0), SampledFunction::constant(y1, 0.0, ell0),
                        Regularity::c01);
}

inline ControlSignal zero_control(double T) { return ControlSignal::constant(0.0, T); }

/// Piecewise-linear u with u(0) = 0, `pieces` random slopes in [-max_slope, max_slope].
inline ControlSignal random_pl_control(std::mt19937_64& rng, double T, int pieces, double max_slope) {
    std::uniform_real_distribution<double> slope(-max_slope, max_slope);
    std::uniform_real_distribution<double> cut(0.0, 1.0);
    std::vector<double> xs{0.0};
    for (int i = 1; i < pieces; ++i) {
        xs.push_back(T * cut(rng));
    }
    xs.push_back(T);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [T](double a, double b) { return b - a < 1e-6 * T; }), xs.end());
    if (xs.back() != T) {
        xs.back() = T;
    }
    std::vector<double> us{0.0};
    for (std::size_t i = 1; i < xs.size(); ++i) {
        us.push_back(us.back() + slope(rng) * (xs[i] - xs[i - 1]));
    }
    return ControlSignal::from_samples(SampledFunction(xs, us), Regularity::c01);
}

/// u(t) = A (1 - cos(w t)), C1-compatible with data at rest.
inline ControlSignal smooth_control(double A, double w, double T, std::size_t count = 20001) {
    auto u = SampledFunction::sample([=](double t) { return A * (1.0 - std::cos(w * t)); }, 0.0, T, count);
    return ControlSignal::from_samples(std::move(u), Regularity::c1);
}

}  // namespace debond::testing
