#pragma once

// Boundary trace f and its derivative, resolved by recursion through the
// front: f'(s) = u'(s) + f'(echo) (1 - v) / (1 + v) with echo = t' - ell(t')
// and t' + ell(t') = s. The echo lies at least 2 ell0 below s.

#include "debond/errors.hpp"
#include "debond/model.hpp"
#include "front_table.hpp"

namespace debond::detail {

struct TraceModel {
    const InitialState* initial;
    const ControlSignal* control;  // may be null while only s <= 0 is needed
    const FrontTable* front;

    double fprime(double s, Side side) const {
        const double l0 = initial->ell0();
        if (s < 0.0 || (s == 0.0 && side == Side::left)) {
            const double x = std::min(-s, l0);
            return 0.5 * (initial->y1()(x) - initial->y0_prime()(x));
        }
        const double up = uprime(s, side);
        if (s < l0 || (s == l0 && side == Side::left)) {
            return up - 0.5 * (initial->y0_prime()(s) + initial->y1()(s));
        }
        const auto p = front->on_tau_plus(s, side);
        return up + fprime(p.tau_minus, side) * (1.0 - p.speed) / (1.0 + p.speed);
    }

    double f(double s) const {
        const double l0 = initial->ell0();
        const auto& y0 = initial->y0();
        const auto& y1 = initial->y1();
        if (s <= 0.0) {
            const double x = std::min(-s, l0);
            return 0.5 * ((y0(x) - y0(0.0)) - y1.integral(0.0, x));
        }
        require_control();
        const auto& u = control->u();
        if (s <= l0) {
            return u(s) - u(u.lower()) - 0.5 * ((y0(s) - y0(0.0)) + y1.integral(0.0, s));
        }
        const auto p = front->on_tau_plus(s, Side::right);
        return u(s) + f(p.tau_minus);
    }

private:
    double uprime(double s, Side side) const {
        require_control();
        return control->uprime()(s, side);
    }

    void require_control() const {
        if (control == nullptr || control->empty()) {
            fail(ErrorKind::domain, "trace beyond s = 0 depends on the control, which is not given");
        }
    }
};

}  // namespace debond::detail
