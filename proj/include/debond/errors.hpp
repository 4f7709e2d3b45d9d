#pragma once

#include <stdexcept>
#include <string>

namespace debond {

enum class ErrorKind {
    domain,
    range,
    invalid_argument,
    invalid_toughness,
    speed_out_of_range,
    incompatible_data,
    incompatible_target,
    step_too_large,
    horizon_exceeded,
    dead_end,
    no_termination,
    c1_switch_violation,
    infeasible_time,
    constraint_violated,
    continuity_failure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "DomainError";
        case ErrorKind::range: return "RangeError";
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::invalid_toughness: return "InvalidToughness";
        case ErrorKind::speed_out_of_range: return "SpeedOutOfRange";
        case ErrorKind::incompatible_data: return "IncompatibleData";
        case ErrorKind::incompatible_target: return "IncompatibleTarget";
        case ErrorKind::step_too_large: return "StepTooLarge";
        case ErrorKind::horizon_exceeded: return "HorizonExceeded";
        case ErrorKind::dead_end: return "DeadEnd";
        case ErrorKind::no_termination: return "NoTermination";
        case ErrorKind::c1_switch_violation: return "C1SwitchViolation";
        case ErrorKind::infeasible_time: return "InfeasibleTime";
        case ErrorKind::constraint_violated: return "ConstraintViolated";
        case ErrorKind::continuity_failure: return "ContinuityFailure";
    }
    return "Error";
}

}  // namespace debond
