#include "debond/branch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "debond/errors.hpp"

namespace debond {

const char* to_string(BranchMode m) noexcept {
    return m == BranchMode::prefer_moving ? "prefer_moving" : "prefer_static";
}

namespace {

constexpr double vmax = 1.0 - 1e-9;

struct Local {
    double Y;
    double K;
};

Local local(const TargetState& target, const Toughness& kappa, double T, double t, double L) {
    const double x = std::clamp(t + L - T, 0.0, target.ellbar0());
    const double a = target.incoming(x);
    return {a * a, 2.0 * kappa(L)};
}

double root_of(const Local& z) {
    return std::clamp((z.K - z.Y) / (z.K + z.Y), 0.0, vmax);
}

enum class Mode { still, moving };

double mode_speed(Mode m, const Local& z) {
    return m == Mode::still ? 0.0 : root_of(z);
}

std::string where(double t, const Local& z) {
    std::ostringstream os;
    os.precision(17);
    os << "at t = " << t << " (Y = " << z.Y << ", K = " << z.K << ")";
    return os.str();
}

class Chooser {
public:
    Chooser(const BranchPolicy& policy, double tol) : policy_(policy), tol_(tol) {}

    Mode decide(double t, const Local& z, Mode current, bool first) const {
        const bool still_ok = z.Y <= z.K + tol_;
        const bool moving_ok = still_ok && z.Y > 0.0;
        if (!still_ok) {
            fail(ErrorKind::dead_end, "no admissible speed " + where(t, z));
        }
        const bool coincide = std::abs(z.K - z.Y) <= tol_;
        const Mode preferred = policy_.mode == BranchMode::prefer_moving && moving_ok && !coincide ? Mode::moving
                                                                                                  : Mode::still;
        if (!policy_.c1_mode) {
            return preferred;
        }
        // C1: the mode persists; switching is allowed only where both
        // options coincide.
        if (coincide) {
            return policy_.mode == BranchMode::prefer_moving && moving_ok ? Mode::moving : Mode::still;
        }
        const bool current_ok = current == Mode::still ? still_ok : moving_ok;
        if (current_ok || first) {
            return current;
        }
        fail(ErrorKind::c1_switch_violation, "branch would have to change speed discontinuously " + where(t, z));
    }

    BranchNode node(double t, const Local& z, double speed) const {
        BranchNode n;
        n.t = t;
        n.Y = z.Y;
        n.K = z.K;
        n.speed = speed;
        n.static_admissible = z.Y <= z.K + tol_;
        if (n.static_admissible && z.Y > 0.0) {
            n.moving_speed = root_of(z);
        }
        const bool distinct = n.moving_speed && *n.moving_speed > tol_;
        n.alternative_admissible = distinct && n.static_admissible;
        return n;
    }

private:
    const BranchPolicy& policy_;
    double tol_;
};

BranchResult assemble(std::vector<BranchNode> nodes, std::vector<double> positions, double alpha) {
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(positions.begin(), positions.end());
    std::vector<double> times, speeds;
    for (const auto& n : nodes) {
        times.push_back(n.t);
        speeds.push_back(n.speed);
    }
    BranchResult r;
    r.script_l = FrontCurve(times, positions, speeds, speeds);
    r.t_bar_star = times.front();
    r.ell_bar_star = positions.front();
    r.ell_bar_star_prime = speeds.front();
    r.alpha = alpha;
    r.is_static = std::all_of(speeds.begin(), speeds.end(), [](double v) { return v == 0.0; });
    r.nodes = std::move(nodes);
    return r;
}

}  // namespace

std::vector<double> branch_speed_options(double Y, double K) {
    if (!(K > 0.0) || !(Y >= 0.0)) {
        fail(ErrorKind::invalid_argument, "need K > 0 and Y >= 0");
    }
    std::vector<double> out;
    if (Y <= K) {
        out.push_back(0.0);
    }
    const double root = (K - Y) / (K + Y);
    if (root >= 0.0 && root < 1.0 && (out.empty() || root != out.back())) {
        out.push_back(root);
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no admissible speed for Y = " << Y << ", K = " << K;
        fail(ErrorKind::dead_end, os.str());
    }
    return out;
}

BranchResult solve_final_branch(const TargetState& target, const Toughness& kappa, double T,
                                const BranchPolicy& policy) {
    if (!(policy.h > 0.0)) {
        fail(ErrorKind::invalid_argument, "branch step must be positive");
    }
    if (!(T > 0.0)) {
        fail(ErrorKind::invalid_argument, "T must be positive");
    }
    const double tol = sampled_tolerance(policy.h);
    const double h = std::min(policy.h, target.ellbar0() / 10.0);
    const Chooser chooser(policy, tol);

    double alpha = 0.0;
    Mode mode = Mode::still;
    if (policy.c1_mode) {
        alpha = classify_final_state(target, kappa, tol).alpha;
        mode = alpha > 0.0 ? Mode::moving : Mode::still;
    }

    std::vector<BranchNode> nodes;
    std::vector<double> positions;
    double t = T;
    double L = target.ellbar0();
    Local z = local(target, kappa, T, t, L);
    mode = chooser.decide(t, z, mode, true);
    double v = mode_speed(mode, z);
    if (!policy.c1_mode) {
        alpha = v;
    }
    nodes.push_back(chooser.node(t, z, v));
    positions.push_back(L);

    const double t_tol = 1e-12 * std::max(1.0, T);
    while (true) {
        const double g = t + L - T;
        if (t <= t_tol) {
            std::ostringstream os;
            os << "t + L(t) stays above T down to t = 0 (L(0) = " << L << ")";
            fail(ErrorKind::no_termination, os.str());
        }
        const double dt = std::min(h, t);
        const double tp = t - dt;
        const double Lp = L - dt * v;
        const double vp = mode_speed(mode, local(target, kappa, T, tp, Lp));
        const double Ln = L - 0.5 * dt * (v + vp);
        const double gn = tp + Ln - T;
        if (gn <= 0.0) {
            const double theta = g / (g - gn);
            if (theta * dt <= t_tol) {
                // The current node already sits on the start line.
                nodes.back().t = T - L;
                break;
            }
            const double Ls = L + theta * (Ln - L);
            const double ts = T - Ls;
            const Local zs = local(target, kappa, T, ts, Ls);
            mode = chooser.decide(ts, zs, mode, false);
            nodes.push_back(chooser.node(ts, zs, mode_speed(mode, zs)));
            positions.push_back(Ls);
            break;
        }
        t = tp;
        L = Ln;
        z = local(target, kappa, T, t, L);
        mode = chooser.decide(t, z, mode, false);
        v = mode_speed(mode, z);
        nodes.push_back(chooser.node(t, z, v));
        positions.push_back(L);
    }
    return assemble(std::move(nodes), std::move(positions), alpha);
}

BranchResult static_final_branch(const TargetState& target, const Toughness& kappa, double T, double h) {
    const double lb = target.ellbar0();
    if (!(T > lb)) {
        std::ostringstream os;
        os << "static branch needs T > ellbar0, got T = " << T << ", ellbar0 = " << lb;
        fail(ErrorKind::infeasible_time, os.str());
    }
    const auto damp = check_damping_bound(target, kappa);
    if (!damp.pass) {
        std::ostringstream os;
        os << "sup |ybar1 + ybar0'|^2 exceeds 2 kappa(ellbar0) by " << damp.worst_violation << " at x = "
           << damp.worst_x;
        fail(ErrorKind::constraint_violated, os.str());
    }
    BranchPolicy policy;
    policy.h = h;
    const Chooser chooser(policy, sampled_tolerance(h));
    const double t0 = T - lb;
    const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lb / h)));
    std::vector<BranchNode> nodes;
    std::vector<double> positions;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = i == 0 ? T : (i == steps ? t0 : T - lb * static_cast<double>(i) / static_cast<double>(steps));
        nodes.push_back(chooser.node(t, local(target, kappa, T, t, lb), 0.0));
        positions.push_back(lb);
    }
    return assemble(std::move(nodes), std::move(positions), 0.0);
}

BranchCheck check_branch(const BranchResult& branch, const TargetState& target, const Toughness& kappa, double T) {
    BranchCheck c;
    c.constraint_excess = -1e300;
    const auto times = branch.script_l.times();
    const auto pos = branch.script_l.positions();
    const auto speeds = branch.script_l.speeds_right();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Local z = local(target, kappa, T, times[i], pos[i]);
        c.constraint_excess = std::max(c.constraint_excess, z.Y - z.K);
        const double v = speeds[i];
        double gap = std::abs(v);
        if (z.Y > 0.0) {
            gap = std::min(gap, std::abs(v - root_of(z)));
        }
        c.speed_mismatch = std::max(c.speed_mismatch, gap);
    }
    return c;
}

}  // namespace debond
