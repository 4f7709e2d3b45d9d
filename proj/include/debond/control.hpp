#pragma once

// Control synthesis. A control is assembled in three stages on the trace
// axis s = t - ell(t):
//   (0, tau_-(tbar_star)]        the front is inflated from ell_star to ellbar_star
//   (tau_-(tbar_star), tau_-(T)] the front follows the final branch and the
//                                trace carries the incoming half of the target
//   (tau_-(T), T]                the trace carries the outgoing half directly
// The trace f' is prescribed on each stage and u' is read off from the
// boundary relation at x = 0.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "debond/branch.hpp"
#include "debond/forward.hpp"
#include "debond/model.hpp"

namespace debond {

/// f'(s) with one-sided limits.
using TraceFunction = std::function<double(double, Side)>;

/// Sign choice and endpoint requirements for the trace under a prescribed
/// front segment. Where the front moves, |f'| is fixed by the speed and only
/// the sign is free; where it rests, f' is free inside the threshold band.
struct SignPolicy {
    double before = 1.0;       // sign where the front moves before switch_time
    double after = 1.0;        // sign where it moves after
    double switch_time = 0.0;
    double start_value = 0.0;  // f' wanted at the segment start if the front rests there
    double end_value = 0.0;    // same at the segment end
};

/// Trace on tau_-(segment) that drives the segment through the Griffith law.
/// On resting stretches f' is linear in s between the edge values and
/// clipped to 2 f'^2 <= kappa.
class PrescribedTrace {
public:
    PrescribedTrace(FrontCurve segment, Toughness kappa, SignPolicy policy);

    double operator()(double s, Side side = Side::right) const;
    double lower() const { return segment_.tau_minus(segment_.start_time()); }
    double upper() const { return segment_.tau_minus(segment_.end_time()); }

private:
    struct Stretch {
        double t0, t1;
        double v0, v1;
    };

    double sign_at(double t) const { return t < policy_.switch_time ? policy_.before : policy_.after; }
    double threshold(double t) const;

    FrontCurve segment_;
    Toughness kappa_;
    SignPolicy policy_;
    std::vector<Stretch> rests_;
};

PrescribedTrace fprime_for_prescribed_front(const FrontCurve& segment, const Toughness& kappa,
                                            const SignPolicy& policy);

/// u'(s) that makes the trace relation hold at s for the given front:
///   s <= ell0: u' = f' + (y0' + y1)(s) / 2
///   s >  ell0: u' = f'(s) - f'(echo) (1 - v) / (1 + v),
/// with t' = tau_+^{-1}(s), v = ell'(t') and echo = tau_-(t').
/// DomainError if the echo falls below -ell0.
double uprime_from_fprime(const TraceFunction& fprime, const FrontCurve& front, const InitialState& initial,
                          double s, Side side = Side::right);

/// uprime_from_fprime at many points, in parallel.
std::vector<double> uprime_samples(const TraceFunction& fprime, const FrontCurve& front,
                                   const InitialState& initial, std::span<const double> s, Side side);

namespace serial {
std::vector<double> uprime_samples(const TraceFunction& fprime, const FrontCurve& front,
                                   const InitialState& initial, std::span<const double> s, Side side);
}  // namespace serial

enum class PlanCase { static_match, a, b, c, d };

const char* to_string(PlanCase c) noexcept;

struct InflationPlan {
    double t_star = 0.0;
    double ell_star = 0.0;
    double ell_star_prime = 0.0;
    double t_bar_star = 0.0;
    double ell_bar_star = 0.0;
    double ell_bar_star_prime = 0.0;
    double v = 0.0;  // mean inflation speed (ellbar_star - ell_star) / (tbar_star - t_star)
    double t_circ = 0.0;
    double delta = 0.0;  // half-width of the resting plateau around t_circ; 0 for C01 plans
    PlanCase plan_case = PlanCase::static_match;
    FrontCurve front_segment;  // on [t_star, tbar_star]
};

struct StageBoundaries {
    double s0 = 0.0;  // tau_-(t_star) = 0
    double s1 = 0.0;  // tau_-(tbar_star)
    double s2 = 0.0;  // tau_-(T)
    double s3 = 0.0;  // T
};

struct SynthesisReport {
    ControlSignal control;
    InflationPlan plan;
    BranchResult branch;
    InitialBranchResult initial_branch;
    StageBoundaries stages;
    Regularity regularity = Regularity::c01;
    /// Prescribed front on [0, T].
    FrontCurve front;
    /// Prescribed trace on [-ell0, T].
    TraceFunction fprime;
    /// Largest jump of u' and of the prescribed ell'.
    double uprime_jump = 0.0;
    double speed_jump = 0.0;
    /// Both one-sided limits of f' at tau_-(T) against -(1 + alpha) ybar0'(ellbar0) / 2.
    double junction_residual = 0.0;
};

SynthesisReport synthesize_c01(const InitialState& initial, const TargetState& target, const Toughness& kappa,
                               double T, const BranchResult& branch, const SolverConfig& cfg);

SynthesisReport synthesize_c1(const InitialState& initial, const TargetState& target, const Toughness& kappa,
                              double T, const BranchResult& branch, const SolverConfig& cfg);

/// Static final branch, then the general synthesis. Need T > 2 ellbar0 and
/// |ybar1 + ybar0'|^2 <= 2 kappa(ellbar0); the C1 variant also ybar1(ellbar0) = 0.
SynthesisReport synthesize_static_c01(const InitialState& initial, const TargetState& target,
                                      const Toughness& kappa, double T, const SolverConfig& cfg);
SynthesisReport synthesize_static_c1(const InitialState& initial, const TargetState& target,
                                     const Toughness& kappa, double T, const SolverConfig& cfg);

struct VerifyTolerances {
    double length = 1e-2;
    double displacement = 1e-2;
    double velocity = 1e-1;
};

struct VerifyReport {
    double length_error = 0.0;        // |ell(T) - ellbar0|
    double displacement_error = 0.0;  // sup |y(T, x) - ybar0(x)|
    double velocity_error = 0.0;      // sup |d_t y(T, x) - ybar1(x)|
    double uprime_jump = 0.0;         // largest jump of the control slope
    double speed_jump = 0.0;          // largest jump of the simulated ell'
    double griffith_residual = 0.0;
    bool pass = false;
    std::vector<double> x;
    FieldSample state;
    SolutionRecord solution;
};

/// Simulates `control` up to T and compares the end state with the target on
/// the common part of [0, ell(T)] and [0, ellbar0].
VerifyReport verify_control(const InitialState& initial, const ControlSignal& control, const TargetState& target,
                            const Toughness& kappa, double T, const SolverConfig& cfg,
                            const VerifyTolerances& tol = {});

VerifyReport verify_synthesis(const SynthesisReport& report, const InitialState& initial,
                              const TargetState& target, const Toughness& kappa, const SolverConfig& cfg,
                              const VerifyTolerances& tol = {});

}  // namespace debond
