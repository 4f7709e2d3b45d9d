#include "debond/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "debond/errors.hpp"

namespace debond {

const char* to_string(PlanCase c) noexcept {
    switch (c) {
        case PlanCase::static_match: return "static_match";
        case PlanCase::a: return "a";
        case PlanCase::b: return "b";
        case PlanCase::c: return "c";
        case PlanCase::d: return "d";
    }
    return "static_match";
}

// ---- prescribed trace on a front segment ----

PrescribedTrace::PrescribedTrace(FrontCurve segment, Toughness kappa, SignPolicy policy)
    : segment_(std::move(segment)), kappa_(std::move(kappa)), policy_(policy) {
    const auto t = segment_.times();
    const auto vl = segment_.speeds_left();
    const auto vr = segment_.speeds_right();
    const std::size_t n = t.size();
    auto resting = [&](std::size_t i) {
        const bool left = i == 0 || vl[i] == 0.0;
        const bool right = i + 1 == n || vr[i] == 0.0;
        return left && right;
    };
    std::size_t i = 0;
    while (i < n) {
        if (!resting(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && resting(j + 1)) {
            ++j;
        }
        if (j > i) {
            Stretch st{t[i], t[j], 0.0, 0.0};
            const double thr0 = threshold(st.t0);
            const double thr1 = threshold(st.t1);
            st.v0 = i == 0 ? std::clamp(policy_.start_value, -thr0, thr0) : sign_at(st.t0) * thr0;
            st.v1 = j + 1 == n ? std::clamp(policy_.end_value, -thr1, thr1) : sign_at(st.t1) * thr1;
            rests_.push_back(st);
        }
        i = j + 1;
    }
}

double PrescribedTrace::threshold(double t) const {
    return fprime_magnitude_for_speed(0.0, kappa_(segment_.position(t)));
}

double PrescribedTrace::operator()(double s, Side side) const {
    s = std::clamp(s, lower(), upper());
    const double t = segment_.tau_minus_inverse(s);
    for (const auto& st : rests_) {
        if (t >= st.t0 && t <= st.t1) {
            const double sa = segment_.tau_minus(st.t0);
            const double sb = segment_.tau_minus(st.t1);
            const double w = sb > sa ? (s - sa) / (sb - sa) : 0.0;
            const double thr = threshold(t);
            return std::clamp(st.v0 + w * (st.v1 - st.v0), -thr, thr);
        }
    }
    const double v = segment_.speed(t, side);
    return sign_at(t) * fprime_magnitude_for_speed(v, kappa_(segment_.position(t)));
}

PrescribedTrace fprime_for_prescribed_front(const FrontCurve& segment, const Toughness& kappa,
                                            const SignPolicy& policy) {
    return PrescribedTrace(segment, kappa, policy);
}

// ---- u' from f' ----

double uprime_from_fprime(const TraceFunction& fprime, const FrontCurve& front, const InitialState& initial,
                          double s, Side side) {
    const double l0 = initial.ell0();
    if (s < l0 || (s == l0 && side == Side::left)) {
        return fprime(s, side) + 0.5 * (initial.y0_prime()(s) + initial.y1()(s));
    }
    double tp = front.tau_plus_inverse(s);
    // Inversion can land a rounding step past a node; the one-sided speed
    // there must come from the node itself.
    const auto times = front.times();
    const double snap = 1e-12 * std::max(1.0, std::abs(s));
    const auto it = std::lower_bound(times.begin(), times.end(), tp - snap);
    if (it != times.end() && std::abs(*it - tp) <= snap) {
        tp = *it;
    }
    const double v = front.speed(tp, side);
    const double echo = front.tau_minus(tp);
    if (echo < -l0 - 1e-12 * std::max(1.0, l0)) {
        std::ostringstream os;
        os << "echo point " << echo << " lies below -ell0 = " << -l0;
        fail(ErrorKind::domain, os.str());
    }
    return fprime(s, side) - fprime(echo, side) * (1.0 - v) / (1.0 + v);
}

namespace {

template <bool Parallel>
std::vector<double> sample_points(const TraceFunction& fprime, const FrontCurve& front, const InitialState& initial,
                                  std::span<const double> s, std::span<const Side> sides) {
    const long count = static_cast<long>(s.size());
    std::vector<double> out(s.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(static) if (Parallel)
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = uprime_from_fprime(fprime, front, initial, s[k], sides[k]);
        } catch (...) {
#pragma omp critical
            error = std::current_exception();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

}  // namespace

std::vector<double> uprime_samples(const TraceFunction& fprime, const FrontCurve& front,
                                   const InitialState& initial, std::span<const double> s, Side side) {
    const std::vector<Side> sides(s.size(), side);
    return sample_points<true>(fprime, front, initial, s, sides);
}

namespace serial {
std::vector<double> uprime_samples(const TraceFunction& fprime, const FrontCurve& front,
                                   const InitialState& initial, std::span<const double> s, Side side) {
    const std::vector<Side> sides(s.size(), side);
    return sample_points<false>(fprime, front, initial, s, sides);
}
}  // namespace serial

namespace {

constexpr double pi = std::numbers::pi;
constexpr double zero_slope = 1e-12;
// Inflation speeds stay below this so that |f'| stays moderate.
constexpr double inflation_vmax = 0.999;

double sgn(double x) {
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

// ---- C1 inflation profile ----

struct Bump {
    enum class Kind { down, up, plateau } kind;
    double p, q, amp, edge;

    double operator()(double t) const {
        if (t < p || t > q) {
            return 0.0;
        }
        const double w = q - p;
        switch (kind) {
            case Kind::down:
                return t >= q ? 0.0 : amp * 0.5 * (1.0 + std::cos(pi * (t - p) / w));
            case Kind::up:
                return t <= p ? 0.0 : amp * 0.5 * (1.0 - std::cos(pi * (t - p) / w));
            case Kind::plateau: {
                if (t <= p || t >= q) {
                    return 0.0;
                }
                const double tau = t - p;
                if (tau < edge) {
                    return amp * 0.5 * (1.0 - std::cos(pi * tau / edge));
                }
                if (tau > w - edge) {
                    return amp * 0.5 * (1.0 + std::cos(pi * (tau - (w - edge)) / edge));
                }
                return amp;
            }
        }
        return 0.0;
    }
};

struct Profile {
    std::vector<Bump> fixed;   // end ramps
    std::vector<Bump> scaled;  // unit plateaus, multiplied by c
    double c = 0.0;

    double base(double t) const {
        double w = 0.0;
        for (const auto& b : fixed) {
            w += b(t);
        }
        return w;
    }
    double unit(double t) const {
        double w = 0.0;
        for (const auto& b : scaled) {
            w += b(t);
        }
        return w;
    }
    double speed(double t) const { return base(t) + c * unit(t); }
};

struct Segment {
    FrontCurve curve;
    double delta = 0.0;
};

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> gl_x{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                     0.9061798459386640};
constexpr std::array<double, 5> gl_w{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};

// C1 front from (t0, l0, a) to (t1, l1, b) at rest on [tc - delta, tc + delta]
// and, where an end slope vanishes, on a delta-stretch at that end.
std::optional<Segment> try_inflate(double t0, double l0, double a, double t1, double l1, double b, double delta,
                                   double step) {
    const double tc = 0.5 * (t0 + t1);
    const bool ma = a > zero_slope;
    const bool mb = b > zero_slope;
    const double p1 = ma ? t0 : t0 + delta;
    const double q1 = tc - delta;
    const double p2 = tc + delta;
    const double q2 = mb ? t1 : t1 - delta;
    const double len1 = q1 - p1;
    const double len2 = q2 - p2;
    if (!(len1 > 0.0 && len2 > 0.0)) {
        return std::nullopt;
    }
    const double gain = l1 - l0;
    const double load = (ma ? a * len1 : 0.0) + (mb ? b * len2 : 0.0);
    const double rho = load > 0.0 ? std::min(0.1, 0.5 * gain / load) : 0.1;

    Profile prof;
    double s1 = p1;
    double e2 = q2;
    if (ma) {
        prof.fixed.push_back({Bump::Kind::down, t0, t0 + rho * len1, a, 0.0});
        s1 = t0 + 0.5 * rho * len1;
    }
    if (mb) {
        prof.fixed.push_back({Bump::Kind::up, t1 - rho * len2, t1, b, 0.0});
        e2 = t1 - 0.5 * rho * len2;
    }
    prof.scaled.push_back({Bump::Kind::plateau, s1, q1, 1.0, 0.1 * (q1 - s1)});
    prof.scaled.push_back({Bump::Kind::plateau, p2, e2, 1.0, 0.1 * (e2 - p2)});

    std::vector<double> t{t0, t1, tc - delta, tc + delta, t0 + delta, t1 - delta};
    for (const auto& bp : prof.fixed) {
        t.insert(t.end(), {bp.p, bp.q});
    }
    for (const auto& bp : prof.scaled) {
        t.insert(t.end(), {bp.p, bp.q, bp.p + bp.edge, bp.q - bp.edge});
    }
    const std::size_t n = static_cast<std::size_t>(std::ceil((t1 - t0) / step));
    for (std::size_t i = 1; i < n; ++i) {
        t.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n));
    }
    std::sort(t.begin(), t.end());
    const double merge = 1e-12 * std::max(1.0, t1);
    std::vector<double> times;
    for (double x : t) {
        if (x < t0 || x > t1) {
            continue;
        }
        if (times.empty() || x - times.back() > merge) {
            times.push_back(x);
        } else if (x == t1) {
            times.back() = t1;
        }
    }
    times.front() = t0;
    times.back() = t1;

    std::vector<double> P0(times.size(), 0.0), P1(times.size(), 0.0);
    std::vector<std::pair<double, double>> probes;  // (base, unit) at quadrature points
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double m = 0.5 * (times[i] + times[i + 1]);
        const double r = 0.5 * (times[i + 1] - times[i]);
        double i0 = 0.0, i1 = 0.0;
        for (std::size_t g = 0; g < gl_x.size(); ++g) {
            const double x = m + r * gl_x[g];
            const double w0 = prof.base(x);
            const double w1 = prof.unit(x);
            i0 += gl_w[g] * w0;
            i1 += gl_w[g] * w1;
            probes.emplace_back(w0, w1);
        }
        P0[i + 1] = P0[i] + r * i0;
        P1[i + 1] = P1[i] + r * i1;
    }
    if (!(P1.back() > 0.0)) {
        return std::nullopt;
    }
    prof.c = (gain - P0.back()) / P1.back();
    if (prof.c < 0.0) {
        return std::nullopt;
    }
    for (double x : times) {
        probes.emplace_back(prof.base(x), prof.unit(x));
    }
    for (const auto& [w0, w1] : probes) {
        if (w0 + prof.c * w1 >= inflation_vmax) {
            return std::nullopt;
        }
    }

    std::vector<double> pos(times.size()), speed(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        pos[i] = l0 + P0[i] + prof.c * P1[i];
        if (i > 0) {
            pos[i] = std::max(pos[i], pos[i - 1]);
        }
        speed[i] = prof.speed(times[i]);
    }
    pos.back() = std::max(l1, pos[pos.size() - 2]);
    speed.front() = ma ? a : 0.0;
    speed.back() = mb ? b : 0.0;
    return Segment{FrontCurve(times, pos, speed, speed), delta};
}

Segment inflate_c1(double t0, double l0, double a, double t1, double l1, double b, double step) {
    double delta = 0.05 * (t1 - t0);
    for (int attempt = 0; attempt < 8; ++attempt, delta *= 0.5) {
        if (auto seg = try_inflate(t0, l0, a, t1, l1, b, delta, step)) {
            return *seg;
        }
    }
    std::ostringstream os;
    os << "cannot gain " << l1 - l0 << " in length over " << t1 - t0
       << " time units with a C1 front of speed below " << inflation_vmax;
    fail(ErrorKind::infeasible_time, os.str());
}

FrontCurve linear_segment(double t0, double l0, double t1, double l1) {
    const double v = std::max(0.0, (l1 - l0) / (t1 - t0));
    return FrontCurve({t0, t1}, {l0, std::max(l0, l1)}, {v, v}, {v, v});
}

// ---- assembled trace on [-ell0, T] ----

struct TraceParts {
    InitialState initial;
    TargetState target;
    BranchResult branch;
    std::optional<PrescribedTrace> stage1;
    double T = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;

    double data(double s) const {
        const double x = std::clamp(-s, 0.0, initial.ell0());
        return 0.5 * (initial.y1()(x) - initial.y0_prime()(x));
    }

    double incoming_part(double s, Side side) const {
        const auto& L = branch.script_l;
        s = std::clamp(s, L.tau_minus_map().range_lower(), L.tau_minus_map().range_upper());
        const double t = L.tau_minus_inverse(s);
        const double v = L.speed(t, side);
        const double x = std::clamp(L.tau_plus(t) - T, 0.0, target.ellbar0());
        return -0.5 * target.incoming(x) * (1.0 + v) / (1.0 - v);
    }

    double outgoing_part(double s) const {
        return 0.5 * target.outgoing(std::clamp(T - s, 0.0, target.ellbar0()));
    }

    double operator()(double s, Side side) const {
        if (s < 0.0 || (s == 0.0 && side == Side::left)) {
            return data(s);
        }
        if (s < s1 || (s == s1 && side == Side::left)) {
            return (*stage1)(s, side);
        }
        if (s < s2 || (s == s2 && side == Side::left)) {
            return incoming_part(s, side);
        }
        return outgoing_part(s);
    }
};

FrontCurve join_fronts(const FrontCurve& first, const FrontCurve& segment, const FrontCurve& last) {
    std::vector<double> t, l, vl, vr;
    auto append = [&](const FrontCurve& c, bool skip_first) {
        const auto ct = c.times();
        for (std::size_t i = skip_first ? 1 : 0; i < ct.size(); ++i) {
            t.push_back(ct[i]);
            l.push_back(l.empty() ? c.positions()[i] : std::max(l.back(), c.positions()[i]));
            vl.push_back(c.speeds_left()[i]);
            vr.push_back(c.speeds_right()[i]);
        }
    };
    append(first, false);
    vr.back() = segment.speeds_right()[0];
    append(segment, true);
    vr.back() = last.speeds_right()[0];
    append(last, true);
    return FrontCurve(std::move(t), std::move(l), std::move(vl), std::move(vr));
}

PiecewiseFunction sample_uprime(const TraceFunction& fprime, const FrontCurve& front, const InitialState& initial,
                                double T, double h, std::vector<double> breaks) {
    breaks.push_back(0.0);
    breaks.push_back(T);
    std::sort(breaks.begin(), breaks.end());
    const double merge = 1e-12 * std::max(1.0, T);
    std::vector<double> knots;
    for (double b : breaks) {
        if (b < 0.0 || b > T) {
            continue;
        }
        if (knots.empty() || b - knots.back() > merge) {
            knots.push_back(b);
        }
    }
    knots.front() = 0.0;
    knots.back() = T;

    std::vector<double> xs;
    std::vector<Side> sides;
    const double step = 0.5 * h;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double a = knots[k];
        const double b = knots[k + 1];
        const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / step)));
        for (std::size_t j = 0; j <= n; ++j) {
            xs.push_back(j == n ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n));
            sides.push_back(j == n ? Side::left : Side::right);
        }
    }
    auto values = sample_points<true>(fprime, front, initial, xs, sides);
    return PiecewiseFunction(std::move(xs), std::move(values));
}

std::vector<double> trace_breaks(const FrontCurve& front, const InitialState& initial, const StageBoundaries& st,
                                 double t_star, double t_bar_star) {
    std::vector<double> out{initial.ell0(), st.s1, st.s2, front.tau_plus(t_star), front.tau_plus(t_bar_star)};
    const auto t = front.times();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(front.speeds_right()[i] - front.speeds_left()[i]) > zero_slope) {
            out.push_back(t[i] - front.positions()[i]);
            out.push_back(t[i] + front.positions()[i]);
        }
    }
    return out;
}

void require_branch_fits(const BranchResult& branch, const TargetState& target, double T) {
    const auto& L = branch.script_l;
    const double slack = 1e-9 * std::max(1.0, T);
    if (L.empty() || std::abs(L.end_time() - T) > slack ||
        std::abs(L.position(L.end_time()) - target.ellbar0()) > slack) {
        fail(ErrorKind::invalid_argument, "final branch must end at (T, ellbar0)");
    }
}

SynthesisReport synthesize(const InitialState& initial, const TargetState& target, const Toughness& kappa,
                           double T, const BranchResult& branch, SolverConfig cfg, Regularity reg) {
    cfg.T = T;
    cfg.validate(initial.ell0());
    const double h = cfg.h;
    const double tol = sampled_tolerance(h);
    require_branch_fits(branch, target, T);

    if (reg == Regularity::c1) {
        if (initial.regularity() != Regularity::c1) {
            fail(ErrorKind::incompatible_data, "C1 synthesis needs C1 initial data");
        }
        const auto report =
            check_initial_compatibility(initial, initial.y0()(0.0), initial.y1()(0.0), kappa, tol);
        if (!report.pass()) {
            std::ostringstream os;
            os << "initial data incompatible:";
            for (const auto& c : report.checks) {
                if (!c.pass) {
                    os << ' ' << c.name << " (residual " << c.residual << ')';
                }
            }
            fail(ErrorKind::incompatible_data, os.str());
        }
        if (branch.script_l.max_speed_jump() > 1e-6 + 10.0 * h) {
            fail(ErrorKind::invalid_argument, "C1 synthesis needs a branch with continuous speed");
        }
    }

    InitialBranchResult ib;
    try {
        ib = solve_initial_branch(initial, kappa, cfg);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::horizon_exceeded) {
            throw;
        }
        fail(ErrorKind::infeasible_time, std::string("the initial branch does not end before T: ") + e.what());
    }

    InflationPlan plan;
    plan.t_star = ib.t_star;
    plan.ell_star = ib.ell_star;
    plan.ell_star_prime = ib.ell_star_prime;
    plan.t_bar_star = branch.t_bar_star;
    plan.ell_bar_star = branch.ell_bar_star;
    plan.ell_bar_star_prime = branch.ell_bar_star_prime;
    plan.t_circ = 0.5 * (plan.t_star + plan.t_bar_star);

    const double eps = 1e-9 * std::max(1.0, T);
    const double gain = plan.ell_bar_star - plan.ell_star;
    if (gain < -eps) {
        std::ostringstream os;
        os.precision(17);
        os << "final branch starts at ellbar_star = " << plan.ell_bar_star << " below ell_star = " << plan.ell_star;
        fail(ErrorKind::infeasible_time, os.str());
    }
    if (!(plan.ell_bar_star < plan.t_bar_star)) {
        std::ostringstream os;
        os.precision(17);
        os << "need ellbar_star < tbar_star, got " << plan.ell_bar_star << " >= " << plan.t_bar_star;
        fail(ErrorKind::infeasible_time, os.str());
    }
    const double a = plan.ell_star_prime;
    const double b = plan.ell_bar_star_prime;
    const bool equal = std::abs(gain) <= eps;
    if (equal) {
        plan.plan_case = PlanCase::static_match;
    } else if (a > zero_slope) {
        plan.plan_case = b > zero_slope ? PlanCase::a : PlanCase::c;
    } else {
        plan.plan_case = b > zero_slope ? PlanCase::b : PlanCase::d;
    }
    if (reg == Regularity::c1 && equal && (a > zero_slope || b > zero_slope)) {
        fail(ErrorKind::infeasible_time, "equal start and end lengths need zero front speed at both ends");
    }
    const double dt = plan.t_bar_star - plan.t_star;
    plan.v = std::max(0.0, gain) / dt;

    if (reg == Regularity::c01 || equal) {
        plan.front_segment = linear_segment(plan.t_star, plan.ell_star, plan.t_bar_star, plan.ell_bar_star);
        plan.delta = reg == Regularity::c1 ? 0.05 * dt : 0.0;
    } else {
        const double step = std::min(0.25 * h, dt / 2000.0);
        auto seg = inflate_c1(plan.t_star, plan.ell_star, a, plan.t_bar_star, plan.ell_bar_star, b, step);
        plan.front_segment = std::move(seg.curve);
        plan.delta = seg.delta;
    }

    auto parts = std::make_shared<TraceParts>(TraceParts{initial, target, branch, std::nullopt, T, 0.0, 0.0});
    StageBoundaries st;
    st.s0 = 0.0;
    st.s1 = branch.script_l.tau_minus_map().range_lower();
    st.s2 = branch.script_l.tau_minus_map().range_upper();
    st.s3 = T;
    parts->s1 = st.s1;
    parts->s2 = st.s2;

    const double start = parts->data(0.0);
    const double junction = parts->incoming_part(st.s1, Side::right);
    SignPolicy sp;
    sp.after = sgn(junction) != 0.0 ? sgn(junction) : (sgn(start) != 0.0 ? sgn(start) : 1.0);
    sp.before = reg == Regularity::c1 && a > zero_slope && sgn(start) != 0.0 ? sgn(start) : sp.after;
    sp.switch_time = plan.t_circ;
    sp.start_value = start;
    sp.end_value = junction;
    parts->stage1.emplace(fprime_for_prescribed_front(plan.front_segment, kappa, sp));

    SynthesisReport out;
    out.front = join_fronts(ib.front, plan.front_segment, branch.script_l);
    out.fprime = [parts](double s, Side side) { return (*parts)(s, side); };
    auto uprime = sample_uprime(out.fprime, out.front, initial, T, h,
                                trace_breaks(out.front, initial, st, plan.t_star, plan.t_bar_star));
    out.uprime_jump = uprime.max_jump();
    out.speed_jump = out.front.max_speed_jump();
    out.control = ControlSignal::from_derivative(initial.y0()(0.0), std::move(uprime), reg);

    const double expected = -0.5 * (1.0 + branch.alpha) * target.ybar0_prime()(target.ellbar0());
    const double left = parts->incoming_part(st.s2, Side::left);
    const double right = parts->outgoing_part(st.s2);
    out.junction_residual = std::max(std::abs(left - expected), std::abs(right - expected));

    if (reg == Regularity::c1) {
        const double jump_tol = 1e-6 + 10.0 * h;
        if (out.uprime_jump > jump_tol || out.speed_jump > jump_tol) {
            std::ostringstream os;
            os << "assembled control is not C1: jump of u' " << out.uprime_jump << ", jump of ell' "
               << out.speed_jump;
            fail(ErrorKind::continuity_failure, os.str());
        }
        if (out.junction_residual > tol) {
            std::ostringstream os;
            os << "trace limits at tau_-(T) disagree by " << out.junction_residual;
            fail(ErrorKind::continuity_failure, os.str());
        }
    }

    out.plan = std::move(plan);
    out.branch = branch;
    out.initial_branch = std::move(ib);
    out.stages = st;
    out.regularity = reg;
    return out;
}

BranchResult static_branch_for(const TargetState& target, const Toughness& kappa, double T, double h) {
    const double lb = target.ellbar0();
    if (!(T > 2.0 * lb)) {
        std::ostringstream os;
        os << "static synthesis needs T > 2 ellbar0, got T = " << T << ", ellbar0 = " << lb;
        fail(ErrorKind::infeasible_time, os.str());
    }
    return static_final_branch(target, kappa, T, h);
}

}  // namespace

SynthesisReport synthesize_c01(const InitialState& initial, const TargetState& target, const Toughness& kappa,
                               double T, const BranchResult& branch, const SolverConfig& cfg) {
    return synthesize(initial, target, kappa, T, branch, cfg, Regularity::c01);
}

SynthesisReport synthesize_c1(const InitialState& initial, const TargetState& target, const Toughness& kappa,
                              double T, const BranchResult& branch, const SolverConfig& cfg) {
    return synthesize(initial, target, kappa, T, branch, cfg, Regularity::c1);
}

SynthesisReport synthesize_static_c01(const InitialState& initial, const TargetState& target,
                                      const Toughness& kappa, double T, const SolverConfig& cfg) {
    const auto branch = static_branch_for(target, kappa, T, cfg.h);
    return synthesize_c01(initial, target, kappa, T, branch, cfg);
}

SynthesisReport synthesize_static_c1(const InitialState& initial, const TargetState& target,
                                     const Toughness& kappa, double T, const SolverConfig& cfg) {
    const auto branch = static_branch_for(target, kappa, T, cfg.h);
    const double end_velocity = target.ybar1()(target.ellbar0());
    if (std::abs(end_velocity) > sampled_tolerance(cfg.h)) {
        std::ostringstream os;
        os << "static C1 synthesis needs ybar1(ellbar0) = 0, got " << end_velocity;
        fail(ErrorKind::constraint_violated, os.str());
    }
    return synthesize_c1(initial, target, kappa, T, branch, cfg);
}

// ---- verification ----

VerifyReport verify_control(const InitialState& initial, const ControlSignal& control, const TargetState& target,
                            const Toughness& kappa, double T, const SolverConfig& cfg,
                            const VerifyTolerances& tol) {
    SolverConfig c = cfg;
    c.T = T;
    VerifyReport r;
    r.solution = solve_front(initial, control, kappa, c);
    const double ell_T = r.solution.front().position(T);
    r.length_error = std::abs(ell_T - target.ellbar0());

    const double xmax = std::min(ell_T, target.ellbar0());
    const std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(xmax / c.h)), 200, 4000);
    for (std::size_t i = 0; i <= n; ++i) {
        r.x.push_back(xmax * static_cast<double>(i) / static_cast<double>(n));
    }
    for (double x : target.grid()) {
        if (x >= 0.0 && x <= xmax) {
            r.x.push_back(x);
        }
    }
    std::sort(r.x.begin(), r.x.end());
    const double merge = 1e-12 * std::max(1.0, xmax);
    r.x.erase(std::unique(r.x.begin(), r.x.end(), [merge](double a, double b) { return b - a <= merge; }),
              r.x.end());
    r.x.back() = xmax;

    r.state = reconstruct_state(r.solution, T, r.x);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        r.displacement_error = std::max(r.displacement_error, std::abs(r.state.y[i] - target.ybar0()(r.x[i])));
        // d_t y may jump at the ends (a front kink reflected onto x = 0 at
        // time T), so the velocity is compared inside only.
        if (i > 0 && i + 1 < r.x.size()) {
            r.velocity_error = std::max(r.velocity_error, std::abs(r.state.dty[i] - target.ybar1()(r.x[i])));
        }
    }
    r.uprime_jump = control.uprime().max_jump();
    r.speed_jump = r.solution.front().max_speed_jump();
    r.griffith_residual = r.solution.griffith_residual();
    r.pass = r.length_error <= tol.length && r.displacement_error <= tol.displacement &&
             r.velocity_error <= tol.velocity;
    return r;
}

VerifyReport verify_synthesis(const SynthesisReport& report, const InitialState& initial,
                              const TargetState& target, const Toughness& kappa, const SolverConfig& cfg,
                              const VerifyTolerances& tol) {
    return verify_control(initial, report.control, target, kappa, report.stages.s3, cfg, tol);
}

}  // namespace debond
