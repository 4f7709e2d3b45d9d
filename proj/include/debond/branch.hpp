#pragma once

// Backward construction of admissible final branches.
//
// A final branch L on [tbar_star, T] ends at the target position, L(T) =
// ellbar0, and starts where t + L(t) = T. Along it, with x = t + L(t) - T,
//   Y = |(ybar1 + ybar0')(x)|^2 <= K = 2 kappa(L(t))
// and L'(t) is either 0 or (K - Y) / (K + Y).

#include <vector>

#include "debond/model.hpp"

namespace debond {

enum class BranchMode { prefer_static, prefer_moving };

const char* to_string(BranchMode m) noexcept;

struct BranchPolicy {
    BranchMode mode = BranchMode::prefer_static;
    /// Keep L' continuous: start from the terminal slope alpha and change
    /// option only where both coincide (Y = K).
    bool c1_mode = false;
    double h = 1e-3;
};

/// Admissible speeds at one node, ascending. DeadEnd if there are none.
std::vector<double> branch_speed_options(double Y, double K);

BranchResult solve_final_branch(const TargetState& target, const Toughness& kappa, double T,
                                const BranchPolicy& policy);

/// L = ellbar0 on [T - ellbar0, T]. ConstraintViolated if
/// sup |ybar1 + ybar0'|^2 > 2 kappa(ellbar0); InfeasibleTime if T <= ellbar0.
BranchResult static_final_branch(const TargetState& target, const Toughness& kappa, double T, double h);

/// Worst violation of the node conditions of a branch: the constraint and
/// the speed matching one of the two options. Non-positive means admissible.
struct BranchCheck {
    double constraint_excess = 0.0;  // max(Y - K)
    double speed_mismatch = 0.0;     // max distance of L' to the option set
};
BranchCheck check_branch(const BranchResult& branch, const TargetState& target, const Toughness& kappa, double T);

}  // namespace debond
