#pragma once

// Forward solver for the coupled front / boundary-trace system and
// reconstruction of the displacement field.
//
// The field is y(t, x) = u(t + x) - f(t + x) + f(t - x) for a trace f that
// is fixed by the data on [-ell0, ell0] and by reflection at the front
// beyond. The march advances ell with the Griffith speed law evaluated at
// s = t - ell(t) and lands exactly on every s where f' may jump.

#include <memory>
#include <span>
#include <vector>

#include "debond/func1d.hpp"
#include "debond/model.hpp"

namespace debond {

enum class Scheme { euler, heun };

const char* to_string(Scheme s) noexcept;

struct SolverConfig {
    double h = 1e-3;
    Scheme scheme = Scheme::heun;
    double speed_clamp_eps = 1e-9;
    double T = 1.0;

    /// Throws InvalidArgument or StepTooLarge.
    void validate(double ell0) const;
};

/// Trace samples kept for output: node abscissae s = t - ell(t) plus the
/// stretch (t - ell(T), T].
struct TraceSamples {
    std::vector<double> s;
    std::vector<double> f;
    std::vector<double> fprime;  // right limits
};

struct FieldSample {
    std::vector<double> y;
    std::vector<double> dty;
    std::vector<double> dxy;
};

class SolutionRecord {
public:
    struct Impl;

    SolutionRecord() = default;
    explicit SolutionRecord(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    const FrontCurve& front() const;
    const TraceSamples& trace() const;
    const InitialState& initial() const;
    const ControlSignal& control() const;
    const Toughness& toughness() const;
    const SolverConfig& config() const;
    double horizon() const;

    /// f'(s) for s in [-ell0, T], resolved through the reflection recursion.
    double fprime(double s, Side side = Side::right) const;
    double f(double s) const;

    /// Field at (t, x) with 0 <= t <= T, 0 <= x <= ell(t).
    double displacement(double t, double x) const;
    /// (d_t y, d_x y) at (t, x).
    std::pair<double, double> gradient(double t, double x) const;

    /// max over nodes of |ell'(t_n) - griffith_speed(f'(t_n - ell_n), kappa(ell_n))|,
    /// both one-sided limits included.
    double griffith_residual() const;

    /// Trace abscissae where f' may jump, sorted.
    std::span<const double> breakpoints() const;

    const Impl& impl() const { return *impl_; }

private:
    std::shared_ptr<const Impl> impl_;
};

/// f' on [-ell0, ell0] from the data and u'.
TraceSamples seed_trace(const InitialState& initial, const ControlSignal& control, std::size_t per_side = 1001);

SolutionRecord solve_front(const InitialState& initial, const ControlSignal& control, const Toughness& kappa,
                           const SolverConfig& cfg);

/// March until t - ell(t) = 0; HorizonExceeded if cfg.T comes first.
InitialBranchResult solve_initial_branch(const InitialState& initial, const Toughness& kappa,
                                         const SolverConfig& cfg);

/// y, d_t y and d_x y on x_grid at time t. DomainError if some x lies
/// outside [0, ell(t)]. Parallel over grid points.
FieldSample reconstruct_state(const SolutionRecord& sol, double t, std::span<const double> x_grid);

namespace serial {
/// Single-threaded reference for reconstruct_state.
FieldSample reconstruct_state(const SolutionRecord& sol, double t, std::span<const double> x_grid);
}  // namespace serial

}  // namespace debond
