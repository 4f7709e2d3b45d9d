#include "debond/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "debond/errors.hpp"

namespace debond {

namespace {

// Largest speed representable below 1 with a useful margin.
constexpr double speed_ceiling = 1.0 - 1e-15;

void check_domain(const SampledFunction& fn, double lower, double upper, const char* name) {
    if (fn.empty()) {
        fail(ErrorKind::invalid_argument, std::string(name) + " is empty");
    }
    const double slack = 1e-9 * std::max(1.0, upper - lower);
    if (std::abs(fn.lower() - lower) > slack || std::abs(fn.upper() - upper) > slack) {
        std::ostringstream os;
        os.precision(17);
        os << name << " must be sampled on [" << lower << ", " << upper << "], got [" << fn.lower() << ", "
           << fn.upper() << "]";
        fail(ErrorKind::invalid_argument, os.str());
    }
}

void check_positive_length(double ell, const char* name) {
    if (!(ell > 0.0) || !std::isfinite(ell)) {
        fail(ErrorKind::invalid_argument, std::string(name) + " must be positive");
    }
}

Check make_check(std::string name, double residual, double tol) {
    return Check{std::move(name), residual, residual <= tol};
}

}  // namespace

const char* to_string(Regularity r) noexcept {
    return r == Regularity::c1 ? "C1" : "C01";
}

Toughness Toughness::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        fail(ErrorKind::invalid_toughness, "toughness must be positive");
    }
    Toughness k;
    k.value_ = value;
    k.c1_ = value;
    k.c2_ = value;
    return k;
}

Toughness Toughness::sampled(SampledFunction samples) {
    const auto v = samples.values();
    if (v.empty()) {
        fail(ErrorKind::invalid_toughness, "empty toughness samples");
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return sampled(std::move(samples), *lo, *hi);
}

Toughness Toughness::sampled(SampledFunction samples, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 >= c1)) {
        fail(ErrorKind::invalid_toughness, "toughness bounds must satisfy 0 < c1 <= c2");
    }
    for (double v : samples.values()) {
        if (!(v >= c1 && v <= c2)) {
            fail(ErrorKind::invalid_toughness, "toughness sample outside [c1, c2]");
        }
    }
    if (samples.lower() > 0.0) {
        fail(ErrorKind::invalid_toughness, "toughness samples must start at x = 0");
    }
    Toughness k;
    k.samples_ = std::move(samples);
    k.c1_ = c1;
    k.c2_ = c2;
    return k;
}

double Toughness::operator()(double x) const {
    if (samples_.empty()) {
        return value_;
    }
    if (x >= samples_.upper()) {
        return samples_.values().back();
    }
    return samples_(x);
}

InitialState::InitialState(double ell0, SampledFunction y0, SampledFunction y1, Regularity regularity)
    : ell0_(ell0), y0_(std::move(y0)), y1_(std::move(y1)), regularity_(regularity) {
    check_positive_length(ell0_, "ell0");
    check_domain(y0_, 0.0, ell0_, "y0");
    check_domain(y1_, 0.0, ell0_, "y1");
    y0_prime_ = y0_.derivative();
}

InitialState InitialState::at_rest(double ell0, Regularity regularity) {
    return InitialState(ell0, SampledFunction::constant(0.0, 0.0, ell0), SampledFunction::constant(0.0, 0.0, ell0),
                        regularity);
}

TargetState::TargetState(double ellbar0, SampledFunction ybar0, SampledFunction ybar1, Regularity regularity)
    : ellbar0_(ellbar0), ybar0_(std::move(ybar0)), ybar1_(std::move(ybar1)), regularity_(regularity) {
    check_positive_length(ellbar0_, "ellbar0");
    check_domain(ybar0_, 0.0, ellbar0_, "ybar0");
    check_domain(ybar1_, 0.0, ellbar0_, "ybar1");
    ybar0_prime_ = ybar0_.derivative();
}

TargetState TargetState::at_rest(double ellbar0, Regularity regularity) {
    return TargetState(ellbar0, SampledFunction::constant(0.0, 0.0, ellbar0),
                       SampledFunction::constant(0.0, 0.0, ellbar0), regularity);
}

std::vector<double> TargetState::grid() const {
    std::vector<double> g;
    for (const SampledFunction* fn : {&ybar0_, &ybar1_, &ybar0_prime_}) {
        g.insert(g.end(), fn->abscissae().begin(), fn->abscissae().end());
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

FrontCurve::FrontCurve(std::vector<double> times, std::vector<double> positions, std::vector<double> speed_left,
                       std::vector<double> speed_right)
    : times_(std::move(times)),
      positions_(std::move(positions)),
      speed_left_(std::move(speed_left)),
      speed_right_(std::move(speed_right)) {
    const std::size_t n = times_.size();
    if (n < 2 || positions_.size() != n || speed_left_.size() != n || speed_right_.size() != n) {
        fail(ErrorKind::invalid_argument, "front curve needs at least two nodes with matching arrays");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (double v : {speed_left_[i], speed_right_[i]}) {
            if (!(v >= 0.0 && v < 1.0)) {
                fail(ErrorKind::speed_out_of_range, "front speed outside [0, 1)");
            }
        }
        if (i > 0 && positions_[i] < positions_[i - 1] - 1e-12 * std::max(1.0, positions_[i - 1])) {
            fail(ErrorKind::invalid_argument, "front position must be nondecreasing");
        }
    }
    positions_fn_ = SampledFunction(times_, positions_);

    std::vector<double> sx, sv;
    sx.reserve(2 * n);
    sv.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            sx.push_back(times_[i]);
            sv.push_back(speed_right_[i]);
        } else if (i + 1 == n) {
            sx.push_back(times_[i]);
            sv.push_back(speed_left_[i]);
        } else {
            sx.push_back(times_[i]);
            sv.push_back(speed_left_[i]);
            if (speed_right_[i] != speed_left_[i]) {
                sx.push_back(times_[i]);
                sv.push_back(speed_right_[i]);
            }
        }
    }
    speed_fn_ = PiecewiseFunction(std::move(sx), std::move(sv));

    std::vector<double> plus(n), minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        plus[i] = times_[i] + positions_[i];
        minus[i] = times_[i] - positions_[i];
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(minus[i] > minus[i - 1]) || !(plus[i] > plus[i - 1])) {
            fail(ErrorKind::step_too_large, "characteristic maps of the front are not strictly increasing");
        }
    }
    tau_plus_ = MonotoneMap(SampledFunction(times_, std::move(plus)));
    tau_minus_ = MonotoneMap(SampledFunction(times_, std::move(minus)));
}

double FrontCurve::max_speed_jump() const {
    double jump = 0.0;
    for (std::size_t i = 1; i + 1 < times_.size(); ++i) {
        jump = std::max(jump, std::abs(speed_right_[i] - speed_left_[i]));
    }
    return jump;
}

ControlSignal ControlSignal::from_samples(SampledFunction u, Regularity regularity) {
    ControlSignal c;
    c.regularity_ = regularity;
    if (regularity == Regularity::c1) {
        c.uprime_ = PiecewiseFunction(u.derivative());
    } else {
        const auto xs = u.abscissae();
        const auto ys = u.values();
        const std::size_t n = xs.size();
        auto slope = [&](std::size_t i) { return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]); };
        std::vector<double> px{xs[0]}, pv{slope(0)};
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double left = slope(i - 1);
            const double right = slope(i);
            if (left == right) {
                continue;
            }
            px.insert(px.end(), {xs[i], xs[i]});
            pv.insert(pv.end(), {left, right});
        }
        px.push_back(xs[n - 1]);
        pv.push_back(slope(n - 2));
        c.uprime_ = PiecewiseFunction(std::move(px), std::move(pv));
    }
    c.u_ = std::move(u);
    return c;
}

ControlSignal ControlSignal::from_derivative(double u0, PiecewiseFunction uprime, Regularity regularity) {
    const auto xs = uprime.abscissae();
    std::vector<double> ux, uv;
    ux.reserve(xs.size());
    uv.reserve(xs.size());
    for (double x : xs) {
        if (!ux.empty() && x == ux.back()) {
            continue;
        }
        ux.push_back(x);
        uv.push_back(u0 + uprime.integral(xs.front(), x));
    }
    ControlSignal c;
    c.u_ = SampledFunction(std::move(ux), std::move(uv));
    c.uprime_ = std::move(uprime);
    c.regularity_ = regularity;
    return c;
}

ControlSignal ControlSignal::constant(double value, double horizon) {
    if (!(horizon > 0.0)) {
        fail(ErrorKind::invalid_argument, "control horizon must be positive");
    }
    ControlSignal c;
    c.u_ = SampledFunction::constant(value, 0.0, horizon);
    c.uprime_ = PiecewiseFunction(SampledFunction::constant(0.0, 0.0, horizon));
    c.regularity_ = Regularity::c1;
    return c;
}

double griffith_speed(double fprime_at_trace, double kappa_at_front) {
    if (!(kappa_at_front > 0.0)) {
        fail(ErrorKind::invalid_toughness, "toughness must be positive");
    }
    const double e = 2.0 * fprime_at_trace * fprime_at_trace;
    const double v = (e - kappa_at_front) / (e + kappa_at_front);
    return std::clamp(v, 0.0, speed_ceiling);
}

double speed_to_fprime_magnitude(double v, double kappa_at_front) {
    if (!(v > 0.0 && v < 1.0)) {
        fail(ErrorKind::speed_out_of_range, "speed must lie in (0, 1)");
    }
    return fprime_magnitude_for_speed(v, kappa_at_front);
}

double fprime_magnitude_for_speed(double v, double kappa_at_front) {
    if (!(v >= 0.0 && v < 1.0)) {
        fail(ErrorKind::speed_out_of_range, "speed must lie in [0, 1)");
    }
    if (!(kappa_at_front > 0.0)) {
        fail(ErrorKind::invalid_toughness, "toughness must be positive");
    }
    return std::sqrt(kappa_at_front * (1.0 + v) / (2.0 * (1.0 - v)));
}

double energy_release_rate(double speed, double slope_at_front) {
    if (!(speed >= 0.0 && speed < 1.0)) {
        fail(ErrorKind::speed_out_of_range, "speed must lie in [0, 1)");
    }
    return 0.5 * (1.0 - speed * speed) * slope_at_front * slope_at_front;
}

bool CheckReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double CheckReport::worst_residual() const {
    double r = 0.0;
    for (const auto& c : checks) {
        r = std::max(r, c.residual);
    }
    return r;
}

double sampled_tolerance(double h) {
    return std::max(exact_tolerance, 10.0 * h);
}

CheckReport check_initial_compatibility(const InitialState& state, double u0, double uprime0,
                                        const Toughness& kappa, double tol) {
    CheckReport report;
    const double l0 = state.ell0();
    report.checks.push_back(make_check("y0(0)=u(0)", std::abs(state.y0()(0.0) - u0), tol));
    report.checks.push_back(make_check("y0(ell0)=0", std::abs(state.y0()(l0)), tol));
    if (state.regularity() == Regularity::c1) {
        report.checks.push_back(make_check("y1(0)=u'(0)", std::abs(state.y1()(0.0) - uprime0), tol));
        const double y1 = state.y1()(l0);
        const double dy0 = state.y0_prime()(l0);
        const double v = griffith_speed(0.5 * (y1 - dy0), kappa(l0));
        report.checks.push_back(make_check("front relation at ell0", std::abs(y1 + v * dy0), tol));
    }
    return report;
}

FinalStateClass classify_final_state(const TargetState& target, const Toughness& kappa, double tol) {
    const double lb = target.ellbar0();
    const double w = target.ybar1()(lb);
    const double d = target.ybar0_prime()(lb);
    const double k = kappa(lb);

    FinalStateClass out;
    const bool passive = std::abs(w) <= tol;
    bool active = false;
    double alpha = 0.0;
    if (d * d > 2.0 * k) {
        alpha = std::sqrt(1.0 - 2.0 * k / (d * d));
        active = std::abs(w + alpha * d) <= tol;
    }
    if (passive) {
        out.alpha = 0.0;
        out.passive = true;
        out.ambiguous = active;
        return out;
    }
    if (active) {
        out.alpha = std::min(alpha, speed_ceiling);
        out.passive = false;
        return out;
    }
    std::ostringstream os;
    os.precision(17);
    os << "target satisfies neither the passive nor the active relation at ellbar0 (ybar1 = " << w
       << ", ybar0' = " << d << ")";
    fail(ErrorKind::incompatible_target, os.str());
}

CheckReport check_final_set(const TargetState& target, const Toughness& kappa, double tol) {
    CheckReport report;
    const double lb = target.ellbar0();
    report.checks.push_back(make_check("ybar0(ellbar0)=0", std::abs(target.ybar0()(lb)), tol));
    if (target.regularity() == Regularity::c1) {
        const double w = target.ybar1()(lb);
        const double d = target.ybar0_prime()(lb);
        const double k = kappa(lb);
        double residual = std::abs(w);
        if (d * d > 2.0 * k) {
            const double alpha = std::sqrt(1.0 - 2.0 * k / (d * d));
            residual = std::min(residual, std::abs(w + alpha * d));
        }
        report.checks.push_back(make_check("terminal front relation", residual, tol));
    }
    return report;
}

namespace {

template <class KappaAt>
DampingReport damping_over(const TargetState& target, const std::vector<double>& grid, KappaAt&& kappa_at,
                           double slack) {
    DampingReport r;
    r.worst_violation = -std::numeric_limits<double>::infinity();
    for (double x : grid) {
        const double a = target.incoming(x);
        const double excess = a * a - 2.0 * kappa_at(x);
        if (excess > r.worst_violation) {
            r.worst_violation = excess;
            r.worst_x = x;
        }
    }
    r.pass = r.worst_violation <= slack;
    return r;
}

}  // namespace

DampingReport check_damping_bound(const TargetState& target, const SampledFunction& kappa_along_front,
                                  double slack) {
    auto grid = target.grid();
    for (double x : kappa_along_front.abscissae()) {
        if (x >= 0.0 && x <= target.ellbar0()) {
            grid.push_back(x);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return damping_over(target, grid, [&](double x) { return kappa_along_front(x); }, slack);
}

DampingReport check_damping_bound(const TargetState& target, const Toughness& kappa, double slack) {
    const double k = kappa(target.ellbar0());
    return damping_over(target, target.grid(), [k](double) { return k; }, slack);
}

}  // namespace debond
