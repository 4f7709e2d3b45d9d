// OpenMP against serial for the two data-parallel kernels: field
// reconstruction on a grid and u' sampling from a prescribed trace.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "debond/control.hpp"
#include "debond/forward.hpp"

using namespace debond;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, std::size_t points, double serial_s, double parallel_s, bool same) {
    std::printf("%-20s %9zu points  serial %8.4f s  parallel %8.4f s  speedup %5.2fx  %s\n", name, points, serial_s,
                parallel_s, serial_s / parallel_s, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t points = argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 200000;
    std::printf("threads: %d\n", omp_get_max_threads());

    // A front driven by a random piecewise-linear control.
    const double T = 5.0;
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.T = T;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    std::vector<double> ts{0.0}, us{0.0};
    for (int i = 1; i <= 12; ++i) {
        ts.push_back(T * i / 12.0);
        us.push_back(us.back() + slope(rng) * T / 12.0);
    }
    const auto control = ControlSignal::from_samples(SampledFunction(ts, us), Regularity::c01);
    const auto sol = solve_front(InitialState::at_rest(1.0), control, Toughness::constant(1.0), cfg);

    std::vector<double> x(points);
    const double ell = sol.front().position(T);
    for (std::size_t i = 0; i < points; ++i) {
        x[i] = ell * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    FieldSample a, b;
    const double rs = best_of(3, [&] { a = serial::reconstruct_state(sol, T, x); });
    const double rp = best_of(3, [&] { b = reconstruct_state(sol, T, x); });
    report("reconstruct_state", points, rs, rp, a.y == b.y && a.dty == b.dty && a.dxy == b.dxy);

    // u' from the solved trace along the solved front.
    const TraceFunction fprime = [&sol](double s, Side side) { return sol.fprime(s, side); };
    const InitialState initial = InitialState::at_rest(1.0);
    std::vector<double> s(points);
    for (std::size_t i = 0; i < points; ++i) {
        s[i] = T * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    std::vector<double> ua, ub;
    const double us_ = best_of(3, [&] { ua = serial::uprime_samples(fprime, sol.front(), initial, s, Side::right); });
    const double up = best_of(3, [&] { ub = uprime_samples(fprime, sol.front(), initial, s, Side::right); });
    report("uprime_samples", points, us_, up, ua == ub);
    return 0;
}
