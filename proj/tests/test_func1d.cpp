#include <cmath>
#include <random>

#include "debond/errors.hpp"
#include "debond/func1d.hpp"
#include "doctest.h"

using namespace debond;

TEST_CASE("evaluate interpolates linearly and is exact at samples") {
    CHECK(SampledFunction::constant(2.0, 0.0, 1.0)(0.5) == 2.0);
    CHECK(SampledFunction({0.0, 1.0}, {0.0, 1.0})(0.25) == doctest::Approx(0.25));
    CHECK(SampledFunction({0.0, 2.0}, {0.0, 4.0})(1.0) == doctest::Approx(2.0));
    SampledFunction f({0.0, 0.3, 1.0}, {1.0, -2.0, 5.0});
    CHECK(f(0.3) == -2.0);
    CHECK(f(1.0) == 5.0);
}

TEST_CASE("evaluate outside the domain throws DomainError") {
    SampledFunction f({0.0, 1.0}, {0.0, 1.0});
    try {
        (void)f(1.5);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
    CHECK_THROWS_AS((void)f(-0.1), Error);
    CHECK_NOTHROW((void)f(1.0 + 1e-12));
}

TEST_CASE("definite integral is exact for the interpolant") {
    auto c = SampledFunction::constant(2.0, 0.0, 1.0);
    CHECK(c.integral(0.0, 1.0) == doctest::Approx(2.0));
    CHECK(c.integral(1.0, 0.0) == doctest::Approx(-2.0));
    CHECK(SampledFunction({0.0, 2.0}, {0.0, 4.0}).integral(0.0, 2.0) == doctest::Approx(4.0));
    SampledFunction f({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    CHECK(f.integral(0.5, 2.0) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("monotone map inversion") {
    MonotoneMap id(SampledFunction({0.0, 1.0}, {0.0, 1.0}));
    CHECK(id.invert(0.7) == doctest::Approx(0.7));

    MonotoneMap shift(SampledFunction({0.0, 5.0}, {1.0, 6.0}));
    CHECK(shift.invert(3.0) == doctest::Approx(2.0));

    // tau_minus for ell(t) = 1 + 0.6 t
    auto tm = SampledFunction::sample([](double t) { return 0.4 * t - 1.0; }, 0.0, 5.0, 101);
    CHECK(MonotoneMap(tm).invert(0.0) == doctest::Approx(2.5).epsilon(1e-13));

    try {
        (void)id.invert(2.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::range);
    }
}

TEST_CASE("derivative examples") {
    auto d0 = SampledFunction::constant(3.0, 0.0, 1.0).derivative();
    CHECK(d0(0.2) == 0.0);
    auto d1 = SampledFunction({0.0, 1.0}, {0.0, 2.0}).derivative();
    CHECK(d1(0.0) == 2.0);
    CHECK(d1(0.7) == 2.0);
    auto sq = SampledFunction::sample([](double x) { return x * x; }, 0.0, 1.0, 1001);
    CHECK(std::abs(sq.derivative()(0.5) - 1.0) <= 1e-3);
}

TEST_CASE("property: inversion round trip on random monotone maps") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> step(0.01, 1.0), rise(1e-3, 2.0), unit(0.0, 1.0);
    for (int m = 0; m < 20; ++m) {
        std::vector<double> xs{0.0}, ys{unit(rng)};
        for (int i = 0; i < 50; ++i) {
            xs.push_back(xs.back() + step(rng));
            ys.push_back(ys.back() + rise(rng));
        }
        MonotoneMap map(SampledFunction(xs, ys));
        const double span = xs.back() - xs.front();
        for (int k = 0; k < 1000; ++k) {
            const double t = xs.front() + span * unit(rng);
            CHECK(std::abs(map.invert(map(t)) - t) <= 1e-10 * span);
        }
    }
}

TEST_CASE("property: integral of the derivative recovers increments") {
    const double h = 1e-3;
    auto f = SampledFunction::sample([](double x) { return std::sin(3.0 * x); }, 0.0, 2.0, 2001);
    auto df = f.derivative();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const double a = unit(rng), b = unit(rng);
        CHECK(std::abs(df.integral(a, b) - (f(b) - f(a))) <= 10.0 * h);
    }
}

TEST_CASE("property: evaluation is monotone for monotone samples") {
    SampledFunction f({0.0, 0.5, 1.0, 2.0}, {0.0, 0.1, 3.0, 3.5});
    double prev = f(0.0);
    for (int i = 1; i <= 400; ++i) {
        const double v = f(2.0 * i / 400.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("piecewise function keeps both limits at a jump") {
    PiecewiseFunction p({0.0, 1.0, 1.0, 2.0}, {1.0, 1.0, -1.0, -1.0});
    CHECK(p(1.0, Side::left) == 1.0);
    CHECK(p(1.0, Side::right) == -1.0);
    CHECK(p(0.5) == 1.0);
    CHECK(p.integral(0.0, 2.0) == doctest::Approx(0.0));
    CHECK(p.integral(0.5, 1.5) == doctest::Approx(0.0));
    CHECK(p.max_jump() == 2.0);
    REQUIRE(p.breakpoints().size() == 1);
    CHECK(p.breakpoints()[0] == 1.0);
    CHECK_THROWS_AS(PiecewiseFunction({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), Error);
}
