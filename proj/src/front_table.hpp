#pragma once

// Node table of a front with exact characteristic coordinates.
//
// tau_minus is stored rather than recomputed as t - ell so that a node placed
// on a trace breakpoint reproduces that breakpoint bit for bit; one-sided
// trace queries at reflected breakpoints rely on it.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "debond/errors.hpp"
#include "debond/func1d.hpp"
#include "debond/model.hpp"

namespace debond::detail {

struct FrontTable {
    std::vector<double> t;
    std::vector<double> ell;
    std::vector<double> vl;
    std::vector<double> vr;
    std::vector<double> sm;  // t - ell
    std::vector<double> sp;  // t + ell

    std::size_t size() const { return t.size(); }

    void push(double time, double pos, double left, double right, double s_minus) {
        t.push_back(time);
        ell.push_back(pos);
        vl.push_back(left);
        vr.push_back(right);
        sm.push_back(s_minus);
        sp.push_back(time + pos);
    }

    void push(double time, double pos, double left, double right) { push(time, pos, left, right, time - pos); }

    struct Point {
        double t;
        double speed;
        double tau_minus;
    };

    /// Point of the front where tau_plus == s, with the one-sided speed.
    Point on_tau_plus(double s, Side side) const {
        return locate(sp, s, side);
    }

    /// Point of the front where tau_minus == s.
    Point on_tau_minus(double s, Side side) const {
        return locate(sm, s, side);
    }

    double position(double time) const {
        const auto [i, w] = bracket(t, time);
        return w == 0.0 ? ell[i] : ell[i] + w * (ell[i + 1] - ell[i]);
    }

    double speed(double time, Side side) const {
        const auto [i, w] = bracket(t, time);
        if (w == 0.0) {
            return side == Side::left ? vl[i] : vr[i];
        }
        return vr[i] + w * (vl[i + 1] - vr[i]);
    }

    double tau_minus(double time) const {
        const auto [i, w] = bracket(t, time);
        return w == 0.0 ? sm[i] : sm[i] + w * (sm[i + 1] - sm[i]);
    }

    FrontCurve curve() const { return FrontCurve(t, ell, vl, vr); }

private:
    struct Bracket {
        std::size_t i;
        double w;
    };

    // Segment [keys[i], keys[i+1]) holding x, or the exact last node.
    static Bracket bracket(const std::vector<double>& keys, double x) {
        const double lo = keys.front();
        const double hi = keys.back();
        const double slack = 1e-9 * std::max(1.0, hi - lo);
        if (!(x >= lo - slack && x <= hi + slack)) {
            fail(ErrorKind::range, "query outside the marched front");
        }
        x = std::clamp(x, lo, hi);
        auto it = std::upper_bound(keys.begin(), keys.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - keys.begin()) - 1;
        if (i + 1 >= keys.size() || x == keys[i]) {
            return {i, 0.0};
        }
        return {i, (x - keys[i]) / (keys[i + 1] - keys[i])};
    }

    Point locate(const std::vector<double>& keys, double s, Side side) const {
        const auto [i, w] = bracket(keys, s);
        if (w == 0.0) {
            return {t[i], side == Side::left ? vl[i] : vr[i], sm[i]};
        }
        return {t[i] + w * (t[i + 1] - t[i]), vr[i] + w * (vl[i + 1] - vr[i]), sm[i] + w * (sm[i + 1] - sm[i])};
    }
};

}  // namespace debond::detail
