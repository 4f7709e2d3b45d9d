#pragma once

// Domain types of the debonding model and the pointwise Griffith kernel.
//
// Units are dimensionless: the wave speed is 1, so admissible front speeds
// lie in [0, 1).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "debond/func1d.hpp"

namespace debond {

enum class Regularity { c01, c1 };

const char* to_string(Regularity r) noexcept;

/// Local toughness kappa(x). Sampled toughness is held at its last value
/// beyond the final sample.
class Toughness {
public:
    static Toughness constant(double value);
    static Toughness sampled(SampledFunction samples);
    static Toughness sampled(SampledFunction samples, double c1, double c2);

    double operator()(double x) const;
    bool is_constant() const { return samples_.empty(); }
    double lower_bound() const { return c1_; }
    double upper_bound() const { return c2_; }
    const SampledFunction& samples() const { return samples_; }

private:
    Toughness() = default;

    double value_ = 1.0;
    SampledFunction samples_;
    double c1_ = 1.0;
    double c2_ = 1.0;
};

/// Initial data (ell0, y0, y1); y0 and y1 live on [0, ell0].
class InitialState {
public:
    InitialState(double ell0, SampledFunction y0, SampledFunction y1, Regularity regularity);

    /// Zero displacement and velocity.
    static InitialState at_rest(double ell0, Regularity regularity = Regularity::c01);

    double ell0() const { return ell0_; }
    const SampledFunction& y0() const { return y0_; }
    const SampledFunction& y1() const { return y1_; }
    const SampledFunction& y0_prime() const { return y0_prime_; }
    Regularity regularity() const { return regularity_; }

private:
    double ell0_;
    SampledFunction y0_;
    SampledFunction y1_;
    SampledFunction y0_prime_;
    Regularity regularity_;
};

/// Target data (ellbar0, ybar0, ybar1) on [0, ellbar0].
class TargetState {
public:
    TargetState(double ellbar0, SampledFunction ybar0, SampledFunction ybar1, Regularity regularity);

    static TargetState at_rest(double ellbar0, Regularity regularity = Regularity::c01);

    double ellbar0() const { return ellbar0_; }
    const SampledFunction& ybar0() const { return ybar0_; }
    const SampledFunction& ybar1() const { return ybar1_; }
    const SampledFunction& ybar0_prime() const { return ybar0_prime_; }
    Regularity regularity() const { return regularity_; }

    /// (ybar1 + ybar0')(x), the part of the target carried by the front.
    double incoming(double x) const { return ybar1_(x) + ybar0_prime_(x); }
    /// (ybar1 - ybar0')(x), the part set directly from the fixed end.
    double outgoing(double x) const { return ybar1_(x) - ybar0_prime_(x); }
    /// Union of the sample grids of ybar0, ybar0' and ybar1.
    std::vector<double> grid() const;

private:
    double ellbar0_;
    SampledFunction ybar0_;
    SampledFunction ybar1_;
    SampledFunction ybar0_prime_;
    Regularity regularity_;
};

/// Front position on a strictly increasing time grid. Speeds may jump at a
/// node, so each node carries a left and a right limit.
class FrontCurve {
public:
    FrontCurve() = default;
    FrontCurve(std::vector<double> times, std::vector<double> positions,
               std::vector<double> speed_left, std::vector<double> speed_right);

    double position(double t) const { return positions_fn_(t); }
    double speed(double t, Side side = Side::right) const { return speed_fn_(t, side); }

    double tau_plus(double t) const { return tau_plus_(t); }
    double tau_minus(double t) const { return tau_minus_(t); }
    double tau_plus_inverse(double s) const { return tau_plus_.invert(s); }
    double tau_minus_inverse(double s) const { return tau_minus_.invert(s); }
    const MonotoneMap& tau_plus_map() const { return tau_plus_; }
    const MonotoneMap& tau_minus_map() const { return tau_minus_; }

    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    std::span<const double> times() const { return times_; }
    std::span<const double> positions() const { return positions_; }
    std::span<const double> speeds_left() const { return speed_left_; }
    std::span<const double> speeds_right() const { return speed_right_; }

    /// Largest |speed_right - speed_left| over interior nodes.
    double max_speed_jump() const;

private:
    std::vector<double> times_;
    std::vector<double> positions_;
    std::vector<double> speed_left_;
    std::vector<double> speed_right_;
    SampledFunction positions_fn_;
    PiecewiseFunction speed_fn_;
    MonotoneMap tau_plus_;
    MonotoneMap tau_minus_;
};

/// Boundary control u on [0, T] together with u'.
class ControlSignal {
public:
    ControlSignal() = default;

    /// C01: u' is the exact piecewise-constant slope of u, with jumps at the
    /// interior samples. C1: u' is the midpoint-slope derivative.
    static ControlSignal from_samples(SampledFunction u, Regularity regularity);
    /// u(t) = u0 + integral of u' from the start of its domain.
    static ControlSignal from_derivative(double u0, PiecewiseFunction uprime, Regularity regularity);
    static ControlSignal constant(double value, double horizon);

    const SampledFunction& u() const { return u_; }
    const PiecewiseFunction& uprime() const { return uprime_; }
    Regularity regularity() const { return regularity_; }
    double horizon() const { return u_.upper(); }
    bool empty() const { return u_.empty(); }

private:
    SampledFunction u_;
    PiecewiseFunction uprime_;
    Regularity regularity_ = Regularity::c01;
};

/// End of the part of the front fixed by the initial data alone.
struct InitialBranchResult {
    double t_star = 0.0;
    double ell_star = 0.0;  // equals t_star
    double ell_star_prime = 0.0;
    /// False for C01 data: ell_star_prime is then only the left-limit slope.
    bool slope_authoritative = false;
    FrontCurve front;  // the branch on [0, t_star]
};

struct BranchNode {
    double t = 0.0;
    double Y = 0.0;  // |(ybar1 + ybar0')(t + L(t) - T)|^2
    double K = 0.0;  // 2 kappa(L(t))
    double speed = 0.0;
    bool static_admissible = false;
    std::optional<double> moving_speed;
    /// The option not chosen was admissible too.
    bool alternative_admissible = false;
};

/// Admissible final branch L on [tbar_star, T].
struct BranchResult {
    FrontCurve script_l;
    double t_bar_star = 0.0;
    double ell_bar_star = 0.0;
    double ell_bar_star_prime = 0.0;
    double alpha = 0.0;
    bool is_static = false;
    std::vector<BranchNode> nodes;  // ascending in t
};

// ---- pointwise Griffith kernel ----

/// max[(2 fp^2 - kappa) / (2 fp^2 + kappa), 0], always below 1.
double griffith_speed(double fprime_at_trace, double kappa_at_front);

/// |f'| that produces speed v in (0, 1): sqrt(kappa (1 + v) / (2 (1 - v))).
double speed_to_fprime_magnitude(double v, double kappa_at_front);

/// Same as speed_to_fprime_magnitude but also accepts v = 0 (threshold value).
double fprime_magnitude_for_speed(double v, double kappa_at_front);

/// Dynamic energy release rate 0.5 (1 - v^2) slope^2.
double energy_release_rate(double speed, double slope_at_front);

// ---- compatibility and admissibility checks ----

struct Check {
    std::string name;
    double residual = 0.0;
    bool pass = true;
};

struct CheckReport {
    std::vector<Check> checks;
    bool pass() const;
    double worst_residual() const;
};

/// Default tolerance of the compatibility checks.
inline constexpr double exact_tolerance = 1e-8;

/// Tolerance for sampled data marched with step h: max(1e-8, 10 h).
double sampled_tolerance(double h);

/// y0(0) = u(0) and y0(ell0) = 0; for C1 data also y1(0) = u'(0) and the
/// Griffith relation at ell0.
CheckReport check_initial_compatibility(const InitialState& state, double u0, double uprime0,
                                        const Toughness& kappa, double tol = exact_tolerance);

/// ybar0(ellbar0) = 0, plus the C1 boundary relation for C1 targets.
CheckReport check_final_set(const TargetState& target, const Toughness& kappa, double tol = exact_tolerance);

struct FinalStateClass {
    double alpha = 0.0;
    bool passive = true;
    /// Both the passive and the active relation hold within tolerance.
    bool ambiguous = false;
};

/// Passive (alpha = 0) or active terminal state; IncompatibleTarget if neither.
FinalStateClass classify_final_state(const TargetState& target, const Toughness& kappa,
                                     double tol = exact_tolerance);

struct DampingReport {
    bool pass = true;
    double worst_violation = 0.0;  // max of |ybar1 + ybar0'|^2 - 2 kappa, may be negative
    double worst_x = 0.0;
};

/// |(ybar1 + ybar0')(x)|^2 <= 2 kappa_along(x) at every grid point of the
/// target and of `kappa_along_front`. `slack` is added to the right side.
DampingReport check_damping_bound(const TargetState& target, const SampledFunction& kappa_along_front,
                                  double slack = 0.0);
/// Constant right-hand side 2 kappa(ellbar0), as for static final branches.
DampingReport check_damping_bound(const TargetState& target, const Toughness& kappa, double slack = 0.0);

}  // namespace debond
