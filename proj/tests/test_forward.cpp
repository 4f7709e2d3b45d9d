#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "debond/errors.hpp"
#include "debond/forward.hpp"
#include "doctest.h"
#include "scenarios.hpp"

using namespace debond;
using namespace debond::testing;

namespace {

double value_at(const TraceSamples& tr, double s) {
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
        if (std::abs(tr.s[i] - s) < 1e-12) {
            return tr.fprime[i];
        }
    }
    FAIL("no sample at s");
    return 0.0;
}

}  // namespace

TEST_CASE("seed trace examples") {
    auto tr = seed_trace(kicked(2.0), zero_control(1.0), 11);
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
        CHECK(tr.fprime[i] == doctest::Approx(tr.s[i] < 0.0 ? 1.0 : -1.0));
    }

    // y1 = y0', u' = (y0' + y1) / 2 = y0'
    auto y0 = SampledFunction::sample([](double x) { return (1.0 - x) * (1.0 - x); }, 0.0, 1.0, 201);
    auto y1 = y0.derivative();
    InitialState moving(1.0, y0, SampledFunction::sample([&](double x) { return y1(x); }, 0.0, 1.0, 201),
                        Regularity::c01);
    // u' must equal y0' pointwise, so build u from y0' directly.
    auto uprime = PiecewiseFunction(moving.y0_prime());
    auto ctl = ControlSignal::from_derivative(1.0, uprime, Regularity::c01);
    auto tr2 = seed_trace(moving, ctl, 101);
    double worst = 0.0;
    for (std::size_t i = 0; i < tr2.s.size(); ++i) {
        if (tr2.s[i] > 0.0) {
            worst = std::max(worst, std::abs(tr2.fprime[i]));
        }
    }
    CHECK(worst <= 1e-12);

    InitialState ramp(1.0, SampledFunction({0.0, 1.0}, {1.0, 0.0}), SampledFunction::constant(0.0, 0.0, 1.0),
                      Regularity::c01);
    auto tr3 = seed_trace(ramp, ControlSignal::constant(1.0, 1.0), 11);
    for (double v : tr3.fprime) {
        CHECK(v == doctest::Approx(0.5));
    }
}

TEST_CASE("zero scenario stays at rest") {
    auto sol = solve_front(InitialState::at_rest(1.0), zero_control(3.0), Toughness::constant(1.0), solver(1e-3, 3.0));
    for (double p : sol.front().positions()) {
        CHECK(p == 1.0);
    }
    for (double f : sol.trace().f) {
        CHECK(f == 0.0);
    }
}

TEST_CASE("constant-speed scenario") {
    auto sol = solve_front(kicked(2.0), zero_control(6.0), Toughness::constant(0.5), solver(1e-3, 6.0));
    const auto& front = sol.front();
    for (double t = 0.0; t <= 5.0; t += 0.25) {
        CHECK(front.position(t) == doctest::Approx(1.0 + 0.6 * t).epsilon(1e-10));
    }
    CHECK(std::abs(front.position(6.0) - 4.0) <= 5e-3);
    CHECK(front.position(5.5) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(front.speed(5.0 - 1e-9, Side::left) == doctest::Approx(0.6));
    CHECK(front.speed(5.0 + 1e-9, Side::right) == 0.0);
    CHECK(sol.fprime(1.5) == doctest::Approx(0.25));

    // characteristic identity at (2, 1)
    auto [dty, dxy] = sol.gradient(2.0, 1.0);
    CHECK(0.5 * (dty - dxy) == doctest::Approx(-1.0));
}

TEST_CASE("reflection scenario") {
    auto u = ControlSignal::from_samples(SampledFunction({0.0, 3.0}, {0.0, 3.0}), Regularity::c01);
    auto sol = solve_front(InitialState::at_rest(1.0), u, Toughness::constant(10.0), solver(1e-3, 3.0));
    for (double p : sol.front().positions()) {
        CHECK(p == 1.0);
    }
    for (double s : {0.1, 1.0, 1.5, 2.0}) {
        CHECK(sol.fprime(s, Side::left) == doctest::Approx(1.0));
    }
    for (double s : {2.0 + 1e-9, 2.5, 3.0}) {
        CHECK(sol.fprime(s, Side::right) == doctest::Approx(2.0));
    }
    CHECK(value_at(sol.trace(), 2.5) == doctest::Approx(2.0));
}

TEST_CASE("initial branch examples") {
    auto rest = solve_initial_branch(InitialState::at_rest(1.0), Toughness::constant(3.0), solver(1e-3, 10.0));
    CHECK(rest.t_star == 1.0);
    CHECK(rest.ell_star == 1.0);
    CHECK(rest.ell_star_prime == 0.0);

    auto moving = solve_initial_branch(kicked(2.0), Toughness::constant(0.5), solver(1e-3, 10.0));
    CHECK(moving.t_star == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(moving.ell_star == moving.t_star);
    CHECK(moving.ell_star_prime == doctest::Approx(0.6));
    CHECK_FALSE(moving.slope_authoritative);

    auto edge = solve_initial_branch(kicked(1.0), Toughness::constant(0.5), solver(1e-3, 10.0));
    CHECK(edge.t_star == doctest::Approx(1.0).epsilon(1e-12));

    try {
        solve_initial_branch(kicked(2.0), Toughness::constant(0.5), solver(1e-3, 2.0));
        FAIL("expected HorizonExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::horizon_exceeded);
    }
}

TEST_CASE("reconstruction examples") {
    auto sol = solve_front(InitialState::at_rest(1.0), zero_control(3.0), Toughness::constant(1.0), solver(1e-3, 3.0));
    std::vector<double> xs{0.0, 0.3, 1.0};
    auto z = reconstruct_state(sol, 2.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(z.y[i] == 0.0);
        CHECK(z.dty[i] == 0.0);
        CHECK(z.dxy[i] == 0.0);
    }

    const double pi = std::numbers::pi;
    auto y0 = SampledFunction::sample([pi](double x) { return std::sin(pi * x); }, 0.0, 1.0, 4001);
    InitialState wave(1.0, y0, SampledFunction::constant(0.0, 0.0, 1.0), Regularity::c01);
    auto sol2 = solve_front(wave, zero_control(1.0), Toughness::constant(100.0), solver(1e-3, 1.0));
    // d'Alembert: (sin(0.75 pi) + sin(0.25 pi)) / 2
    CHECK(sol2.displacement(0.25, 0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));

    CHECK_THROWS_AS(sol.displacement(1.0, 1.5), Error);
}

TEST_CASE("solver configuration is validated") {
    auto init = InitialState::at_rest(1.0);
    auto k = Toughness::constant(1.0);
    try {
        solve_front(init, zero_control(3.0), k, solver(0.5, 3.0));
        FAIL("expected StepTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::step_too_large);
    }
    try {
        solve_front(init, zero_control(2.0), k, solver(1e-3, 3.0));
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
    try {
        solve_front(kicked(2.0), ControlSignal::constant(1.0, 3.0), k, solver(1e-3, 3.0));
        FAIL("expected IncompatibleData");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::incompatible_data);
    }
}

TEST_CASE("property: Griffith residual and front constraints over random controls") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> kd(0.3, 3.0);
    const double h = 1e-3;
    for (int trial = 0; trial < 20; ++trial) {
        auto u = random_pl_control(rng, 5.0, 12, 3.0);
        auto sol = solve_front(InitialState::at_rest(1.0), u, Toughness::constant(kd(rng)), solver(h, 5.0));
        CHECK(sol.griffith_residual() <= 10.0 * h);
        const auto& front = sol.front();
        const auto p = front.positions();
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(front.speeds_left()[i] >= 0.0);
            REQUIRE(front.speeds_right()[i] < 1.0);
            if (i > 0) {
                REQUIRE(p[i] >= p[i - 1]);
                const double dt = front.times()[i] - front.times()[i - 1];
                const double mid = 0.5 * (front.speeds_right()[i - 1] + front.speeds_left()[i]);
                REQUIRE(std::abs((p[i] - p[i - 1]) / dt - mid) <= 10.0 * h);
            }
        }
    }
}

TEST_CASE("property: characteristic identity and boundary conditions") {
    const double h = 1e-3;
    auto u = smooth_control(1.0, 2.0, 4.0);
    auto sol = solve_front(InitialState::at_rest(1.0, Regularity::c1), u, Toughness::constant(2.0), solver(h, 4.0));
    CHECK(sol.front().position(4.0) > 1.05);  // the front did move

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double d = 1e-4;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = 0.1 + 3.8 * unit(rng);
        const double ell = sol.front().position(t - d);
        const double x = 0.05 + (ell - 0.1) * unit(rng);
        const double yt = (sol.displacement(t + d, x) - sol.displacement(t - d, x)) / (2.0 * d);
        const double yx = (sol.displacement(t, x + d) - sol.displacement(t, x - d)) / (2.0 * d);
        worst = std::max(worst, std::abs(0.5 * (yt - yx) - sol.fprime(t - x)));
    }
    CHECK(worst <= 50.0 * h);

    double bc = 0.0;
    for (double t : sol.front().times()) {
        bc = std::max(bc, std::abs(sol.displacement(t, 0.0) - u.u()(t)));
        bc = std::max(bc, std::abs(sol.displacement(t, sol.front().position(t))));
    }
    CHECK(bc <= 10.0 * h);
}

TEST_CASE("property: damping bound at the horizon") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> kd(0.3, 3.0);
    const double h = 1e-3;
    const double T = 5.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double k = kd(rng);
        auto sol = solve_front(InitialState::at_rest(1.0), random_pl_control(rng, T, 10, 3.0),
                               Toughness::constant(k), solver(h, T));
        const double ell_T = sol.front().position(T);
        std::vector<double> xs;
        for (int i = 0; i <= 400; ++i) {
            xs.push_back(ell_T * i / 400.0);
        }
        auto field = reconstruct_state(sol, T, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double a = field.dty[i] + field.dxy[i];
            REQUIRE(a * a <= 2.0 * k + 20.0 * h);
        }
    }
}

TEST_CASE("property: parallel and serial reconstruction agree") {
    std::mt19937_64 rng(8);
    auto sol = solve_front(InitialState::at_rest(1.0), random_pl_control(rng, 4.0, 8, 3.0), Toughness::constant(1.0),
                           solver(1e-3, 4.0));
    std::vector<double> xs;
    const double ell = sol.front().position(3.0);
    for (int i = 0; i <= 5000; ++i) {
        xs.push_back(ell * i / 5000.0);
    }
    auto a = reconstruct_state(sol, 3.0, xs);
    auto b = serial::reconstruct_state(sol, 3.0, xs);
    CHECK(a.y == b.y);
    CHECK(a.dty == b.dty);
    CHECK(a.dxy == b.dxy);
}

TEST_CASE("convergence under step refinement") {
    // Event landing makes the constant-speed oracle exact for both schemes.
    for (Scheme s : {Scheme::euler, Scheme::heun}) {
        auto sol = solve_front(kicked(2.0), zero_control(6.0), Toughness::constant(0.5), solver(1e-2, 6.0, s));
        CHECK(std::abs(sol.front().position(6.0) - 4.0) <= 1e-10);
    }

    // Smoothly varying speed: observed order against a fine reference.
    auto u = smooth_control(1.0, 2.0, 4.0, 40001);
    auto init = InitialState::at_rest(1.0, Regularity::c1);
    auto k = Toughness::constant(2.0);
    const double ref = solve_front(init, u, k, solver(2.5e-5, 4.0)).front().position(4.0);
    for (Scheme s : {Scheme::euler, Scheme::heun}) {
        const double e1 = std::abs(solve_front(init, u, k, solver(4e-3, 4.0, s)).front().position(4.0) - ref);
        const double e2 = std::abs(solve_front(init, u, k, solver(2e-3, 4.0, s)).front().position(4.0) - ref);
        const double order = s == Scheme::euler ? 1.0 : 2.0;
        MESSAGE(std::string(to_string(s)), ": errors ", e1, " -> ", e2);
        CHECK((e2 <= e1 / std::pow(2.0, order) * 1.5 || e2 <= 1e-9));
    }
}
