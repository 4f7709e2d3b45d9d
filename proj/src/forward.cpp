#include "debond/forward.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>

#include "debond/errors.hpp"
#include "front_table.hpp"
#include "trace_model.hpp"

namespace debond {

const char* to_string(Scheme s) noexcept {
    return s == Scheme::euler ? "euler" : "heun";
}

void SolverConfig::validate(double ell0) const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        fail(ErrorKind::invalid_argument, "h must be positive");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        fail(ErrorKind::invalid_argument, "T must be positive");
    }
    if (!(speed_clamp_eps > 0.0 && speed_clamp_eps < 1e-3)) {
        fail(ErrorKind::invalid_argument, "speed_clamp_eps must lie in (0, 1e-3)");
    }
    if (h > ell0 / 10.0 * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "h = " << h << " exceeds ell0 / 10 = " << ell0 / 10.0;
        fail(ErrorKind::step_too_large, os.str());
    }
}

struct SolutionRecord::Impl {
    InitialState initial;
    ControlSignal control;
    Toughness kappa;
    SolverConfig cfg;
    detail::FrontTable table;
    FrontCurve curve;
    std::vector<double> breakpoints;
    TraceSamples trace;

    detail::TraceModel model() const { return {&initial, &control, &table}; }
};

namespace {

struct MarchResult {
    detail::FrontTable table;
    std::vector<double> breakpoints;
    bool reached_zero = false;
};

class BreakpointSet {
public:
    explicit BreakpointSet(double merge_gap) : gap_(merge_gap) {}

    void insert(double s) {
        auto it = std::lower_bound(xs_.begin(), xs_.end(), s);
        if (it != xs_.end() && *it - s <= gap_) {
            return;
        }
        if (it != xs_.begin() && s - *(it - 1) <= gap_) {
            return;
        }
        xs_.insert(it, s);
    }

    std::optional<double> next_after(double s) const {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
        if (it == xs_.end()) {
            return std::nullopt;
        }
        return *it;
    }

    std::vector<double> release() { return std::move(xs_); }

private:
    double gap_;
    std::vector<double> xs_;
};

// Advances the front from (0, ell0) to cfg.T, or to the first t with
// t - ell(t) = 0 when stop_at_zero. Without a control only that initial
// stretch can be marched.
MarchResult march(const InitialState& initial, const ControlSignal* control, const Toughness& kappa,
                  const SolverConfig& cfg, bool stop_at_zero) {
    const double h = cfg.h;
    const double T = cfg.T;
    const double l0 = initial.ell0();
    const double vmax = 1.0 - cfg.speed_clamp_eps;
    const bool heun = cfg.scheme == Scheme::heun;

    MarchResult out;
    auto& F = out.table;
    detail::TraceModel model{&initial, control, &F};
    auto law = [&](double s, double pos, Side side) {
        return std::min(griffith_speed(model.fprime(s, side), kappa(pos)), vmax);
    };

    BreakpointSet bps(1e-6 * h);
    bps.insert(0.0);
    bps.insert(l0);
    if (control != nullptr) {
        for (double b : control->uprime().breakpoints()) {
            if (b > 0.0 && b <= T) {
                bps.insert(b);
            }
        }
    }

    const double v0 = law(-l0, l0, Side::right);
    F.push(0.0, l0, v0, v0, -l0);

    const double t_tol = 1e-10 * std::max(1.0, T);
    while (T - F.t.back() > t_tol) {
        const std::size_t n = F.size() - 1;
        const double t = F.t[n];
        const double pos = F.ell[n];
        const double vr = F.vr[n];
        const double s = F.sm[n];

        double target = (std::floor(t / h + 1e-9) + 1.0) * h;
        if (target - t < 1e-3 * h) {
            target += h;
        }
        if (target > T || T - target < 1e-3 * h) {
            target = T;
        }
        const double dt = target - t;
        const auto sb = bps.next_after(s);

        const double pos_pred = pos + dt * vr;
        const double s_pred = target - pos_pred;
        bool land = sb && s_pred >= *sb;
        if (!land) {
            double pos_new = pos_pred;
            if (heun) {
                const double v1 = law(s_pred, pos_pred, Side::right);
                pos_new = pos + 0.5 * dt * (vr + v1);
            }
            const double s_new = target - pos_new;
            land = sb && s_new >= *sb;
            if (!land) {
                const double v = law(s_new, pos_new, Side::right);
                F.push(target, pos_new, v, v, s_new);
                continue;
            }
        }

        // Land on the breakpoint: solve t_b - ell(t_b) = sb for the step.
        const double b = *sb;
        double vbar = vr;
        double db = 0.0;
        for (int k = 0; k < 4; ++k) {
            db = (b - s) / (1.0 - vbar);
            const double v_end = law(b, pos + db * vbar, Side::left);
            vbar = heun ? 0.5 * (vr + v_end) : vr;
        }
        db = (b - s) / (1.0 - vbar);

        if (t + db > T + t_tol) {
            // Breakpoint just past the horizon; finish with the trace frozen
            // on its left.
            const double dT = T - t;
            const double pp = pos + dT * vr;
            double pos_new = pp;
            if (heun) {
                pos_new = pos + 0.5 * dT * (vr + law(std::min(T - pp, b), pp, Side::left));
            }
            const double s_new = T - pos_new;
            const double v = law(std::min(s_new, b), pos_new, Side::left);
            F.push(T, pos_new, v, v, s_new);
            break;
        }

        double t_b = t + db;
        double pos_b = t_b - b;
        if (pos_b < pos) {
            pos_b = pos;
            t_b = b + pos;
        }
        if (db < 1e-6 * h && n > 0) {
            // Too close to the current node: move that node onto the
            // breakpoint instead of adding a sliver.
            F.t.pop_back();
            F.ell.pop_back();
            const double vl_keep = F.vl.back();
            F.vl.pop_back();
            F.vr.pop_back();
            F.sm.pop_back();
            F.sp.pop_back();
            pos_b = pos;
            t_b = b + pos;
            const double right = stop_at_zero && b == 0.0 ? vl_keep : law(b, pos_b, Side::right);
            F.push(t_b, pos_b, vl_keep, right, b);
        } else {
            const double left = law(b, pos_b, Side::left);
            const double right = stop_at_zero && b == 0.0 ? left : law(b, pos_b, Side::right);
            F.push(t_b, pos_b, left, right, b);
        }
        if (stop_at_zero && b == 0.0) {
            out.reached_zero = true;
            break;
        }
        const double reflected = F.sp.back();
        if (reflected <= T) {
            bps.insert(reflected);
        }
    }
    out.breakpoints = bps.release();
    return out;
}

void require_compatible(const InitialState& initial, const ControlSignal& control, const Toughness& kappa,
                        double tol) {
    const double up0 = control.uprime()(control.uprime().lower(), Side::right);
    const auto report = check_initial_compatibility(initial, control.u()(control.u().lower()), up0, kappa, tol);
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
}

void fill_trace(const detail::TraceModel& model, const detail::FrontTable& F, const std::vector<double>& bps,
                double T, double h, TraceSamples& out) {
    std::vector<double> s(F.sm.begin(), F.sm.end());
    const double s_end = F.sm.back();
    const std::size_t count = static_cast<std::size_t>(std::ceil((T - s_end) / h));
    for (std::size_t i = 1; i < count; ++i) {
        s.push_back(s_end + (T - s_end) * static_cast<double>(i) / static_cast<double>(count));
    }
    for (double b : bps) {
        if (b > s_end && b < T) {
            s.push_back(b);
        }
    }
    if (T > s_end) {
        s.push_back(T);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out.s = std::move(s);
    out.f.resize(out.s.size());
    out.fprime.resize(out.s.size());
    for (std::size_t i = 0; i < out.s.size(); ++i) {
        out.f[i] = model.f(out.s[i]);
        out.fprime[i] = model.fprime(out.s[i], Side::right);
    }
}

void check_point(const SolutionRecord::Impl& r, double t, double x) {
    const double T = r.cfg.T;
    const double slack = 1e-9 * std::max(1.0, T);
    if (!(t >= -slack && t <= T + slack)) {
        std::ostringstream os;
        os.precision(17);
        os << "t = " << t << " outside [0, " << T << "]";
        fail(ErrorKind::domain, os.str());
    }
    const double ell = r.table.position(std::clamp(t, 0.0, T));
    if (!(x >= -slack && x <= ell + slack)) {
        std::ostringstream os;
        os.precision(17);
        os << "x = " << x << " outside [0, ell(t) = " << ell << "]";
        fail(ErrorKind::domain, os.str());
    }
}

struct PointValue {
    double y;
    double dty;
    double dxy;
};

PointValue evaluate_point(const SolutionRecord::Impl& r, double t, double x) {
    t = std::clamp(t, 0.0, r.cfg.T);
    x = std::clamp(x, 0.0, r.table.position(t));
    const auto model = r.model();
    const auto& y0 = r.initial.y0();
    const auto& y1 = r.initial.y1();
    const double l0 = r.initial.ell0();
    const double a = t + x;
    const double d = t - x;

    PointValue out{};
    // At a trace jump the incoming slope is taken from the left.
    const double A = model.fprime(d, Side::left);
    double B = 0.0;
    if (a < l0) {
        if (d <= 0.0) {
            out.y = 0.5 * (y0(a) + y0(-d)) + 0.5 * y1.integral(-d, a);
        } else {
            out.y = r.control.u()(d) + 0.5 * (y0(a) - y0(d)) + 0.5 * y1.integral(d, a);
        }
        B = 0.5 * (r.initial.y0_prime()(a) + y1(a));
    } else {
        const auto p = r.table.on_tau_plus(a, Side::right);
        out.y = model.f(d) - model.f(p.tau_minus);
        B = -model.fprime(p.tau_minus, Side::right) * (1.0 - p.speed) / (1.0 + p.speed);
    }
    out.dty = A + B;
    out.dxy = B - A;
    return out;
}

}  // namespace

const FrontCurve& SolutionRecord::front() const { return impl_->curve; }
const TraceSamples& SolutionRecord::trace() const { return impl_->trace; }
const InitialState& SolutionRecord::initial() const { return impl_->initial; }
const ControlSignal& SolutionRecord::control() const { return impl_->control; }
const Toughness& SolutionRecord::toughness() const { return impl_->kappa; }
const SolverConfig& SolutionRecord::config() const { return impl_->cfg; }
double SolutionRecord::horizon() const { return impl_->cfg.T; }
std::span<const double> SolutionRecord::breakpoints() const { return impl_->breakpoints; }

double SolutionRecord::fprime(double s, Side side) const { return impl_->model().fprime(s, side); }

double SolutionRecord::f(double s) const { return impl_->model().f(s); }

double SolutionRecord::displacement(double t, double x) const {
    check_point(*impl_, t, x);
    return evaluate_point(*impl_, t, x).y;
}

std::pair<double, double> SolutionRecord::gradient(double t, double x) const {
    check_point(*impl_, t, x);
    const auto p = evaluate_point(*impl_, t, x);
    return {p.dty, p.dxy};
}

double SolutionRecord::griffith_residual() const {
    const auto& r = *impl_;
    const auto model = r.model();
    const double vmax = 1.0 - r.cfg.speed_clamp_eps;
    double worst = 0.0;
    for (std::size_t n = 0; n < r.table.size(); ++n) {
        const double k = r.kappa(r.table.ell[n]);
        const double s = r.table.sm[n];
        const double right = std::min(griffith_speed(model.fprime(s, Side::right), k), vmax);
        worst = std::max(worst, std::abs(r.table.vr[n] - right));
        if (n > 0) {
            const double left = std::min(griffith_speed(model.fprime(s, Side::left), k), vmax);
            worst = std::max(worst, std::abs(r.table.vl[n] - left));
        }
    }
    return worst;
}

TraceSamples seed_trace(const InitialState& initial, const ControlSignal& control, std::size_t per_side) {
    const InitialState as_c01(initial.ell0(), initial.y0(), initial.y1(), Regularity::c01);
    require_compatible(as_c01, control, Toughness::constant(1.0), exact_tolerance);
    if (per_side < 2) {
        per_side = 2;
    }
    const double l0 = initial.ell0();
    if (control.horizon() < l0) {
        fail(ErrorKind::domain, "control must cover [0, ell0] to seed the trace");
    }
    detail::FrontTable none;
    detail::TraceModel model{&initial, &control, &none};
    TraceSamples out;
    for (std::size_t i = 0; i < per_side; ++i) {
        out.s.push_back(-l0 + l0 * static_cast<double>(i) / static_cast<double>(per_side - 1));
    }
    for (std::size_t i = 1; i < per_side; ++i) {
        out.s.push_back(l0 * static_cast<double>(i) / static_cast<double>(per_side - 1));
    }
    for (double s : out.s) {
        out.f.push_back(model.f(s));
        out.fprime.push_back(model.fprime(s, s >= l0 ? Side::left : Side::right));
    }
    return out;
}

SolutionRecord solve_front(const InitialState& initial, const ControlSignal& control, const Toughness& kappa,
                           const SolverConfig& cfg) {
    cfg.validate(initial.ell0());
    if (control.empty()) {
        fail(ErrorKind::invalid_argument, "no control given");
    }
    const double slack = 1e-9 * std::max(1.0, cfg.T);
    if (control.u().lower() > slack || control.horizon() < cfg.T - slack) {
        std::ostringstream os;
        os << "control covers [" << control.u().lower() << ", " << control.horizon() << "], need [0, " << cfg.T
           << "]";
        fail(ErrorKind::domain, os.str());
    }
    if (initial.regularity() == Regularity::c1 && control.regularity() == Regularity::c1) {
        require_compatible(initial, control, kappa, sampled_tolerance(cfg.h));
    } else {
        // C01: only the value conditions apply.
        const InitialState as_c01(initial.ell0(), initial.y0(), initial.y1(), Regularity::c01);
        require_compatible(as_c01, control, kappa, sampled_tolerance(cfg.h));
    }

    auto m = march(initial, &control, kappa, cfg, false);
    auto impl = std::make_shared<SolutionRecord::Impl>(
        SolutionRecord::Impl{initial, control, kappa, cfg, std::move(m.table), FrontCurve{},
                             std::move(m.breakpoints), TraceSamples{}});
    impl->curve = impl->table.curve();
    fill_trace(impl->model(), impl->table, impl->breakpoints, cfg.T, cfg.h, impl->trace);
    return SolutionRecord(std::move(impl));
}

InitialBranchResult solve_initial_branch(const InitialState& initial, const Toughness& kappa,
                                         const SolverConfig& cfg) {
    cfg.validate(initial.ell0());
    const double tol = sampled_tolerance(cfg.h);
    const double end_value = std::abs(initial.y0()(initial.ell0()));
    if (end_value > tol) {
        std::ostringstream os;
        os << "y0(ell0) = " << initial.y0()(initial.ell0()) << " must vanish";
        fail(ErrorKind::incompatible_data, os.str());
    }
    auto m = march(initial, nullptr, kappa, cfg, true);
    if (!m.reached_zero) {
        std::ostringstream os;
        os << "t - ell(t) stays negative up to T = " << cfg.T;
        fail(ErrorKind::horizon_exceeded, os.str());
    }
    InitialBranchResult out;
    out.t_star = m.table.t.back();
    out.ell_star = m.table.ell.back();
    out.ell_star_prime = m.table.vl.back();
    out.slope_authoritative = initial.regularity() == Regularity::c1;
    out.front = m.table.curve();
    return out;
}

namespace {

template <bool Parallel>
FieldSample reconstruct(const SolutionRecord& sol, double t, std::span<const double> x_grid) {
    const auto& r = sol.impl();
    for (double x : x_grid) {
        check_point(r, t, x);
    }
    const std::size_t n = x_grid.size();
    FieldSample out;
    out.y.resize(n);
    out.dty.resize(n);
    out.dxy.resize(n);
    std::exception_ptr error;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (Parallel)
    for (long i = 0; i < count; ++i) {
        try {
            const auto p = evaluate_point(r, t, x_grid[static_cast<std::size_t>(i)]);
            out.y[static_cast<std::size_t>(i)] = p.y;
            out.dty[static_cast<std::size_t>(i)] = p.dty;
            out.dxy[static_cast<std::size_t>(i)] = p.dxy;
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

FieldSample reconstruct_state(const SolutionRecord& sol, double t, std::span<const double> x_grid) {
    return reconstruct<true>(sol, t, x_grid);
}

namespace serial {
FieldSample reconstruct_state(const SolutionRecord& sol, double t, std::span<const double> x_grid) {
    return reconstruct<false>(sol, t, x_grid);
}
}  // namespace serial

}  // namespace debond
