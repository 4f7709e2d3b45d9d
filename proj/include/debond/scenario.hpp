#pragma once

// Scenario configuration: a single JSON document.
//
//   {
//     "T": 6,
//     "regularity": "c01" | "c1",
//     "toughness": {"constant": 1} | {"samples": [[x, k], ...], "bounds": [c1, c2]},
//     "initial": {"ell0": 1, "y0": FN, "y1": FN},
//     "target": {"ellbar0": 2, "ybar0": FN, "ybar1": FN},        optional
//     "control": FN,                                               optional
//     "solver": {"h": 0.001, "scheme": "heun", "speed_clamp_eps": 1e-9},
//     "branch": {"policy": "prefer_static", "static": false},
//     "verify": {"length": 0.01, "displacement": 0.01, "velocity": 0.1},
//     "output": "out"
//   }
//
// FN is one of
//   {"samples": [[x, y], ...]}
//   {"preset": "constant", "c": ...}
//   {"preset": "linear", "a": ..., "b": ...}              a + b x
//   {"preset": "sine", "A": ..., "omega": ..., "phi": ...} A sin(omega x + phi)
//   {"file": "control.csv"}                               first two CSV columns
// Presets take an optional "resolution" (sample count, default 1001) and are
// sampled on the domain of the field: [0, ell0], [0, ellbar0] or [0, T].

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "debond/branch.hpp"
#include "debond/control.hpp"
#include "debond/forward.hpp"
#include "debond/model.hpp"

namespace debond {

/// Malformed or inconsistent configuration; `field` is the JSON path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct FunctionSpec {
    enum class Kind { samples, constant, linear, sine, file };
    Kind kind = Kind::constant;
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;
    double A = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    std::size_t resolution = 1001;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string path;

    static FunctionSpec constant(double value);

    /// Samples on [lower, upper]; tables must cover that interval.
    SampledFunction materialize(double lower, double upper, const std::filesystem::path& base,
                                const std::string& field) const;
    bool operator==(const FunctionSpec&) const = default;
};

struct ToughnessSpec {
    std::optional<double> value = 1.0;  // constant toughness
    std::vector<double> xs;
    std::vector<double> ys;
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;

    Toughness build() const;
    bool operator==(const ToughnessSpec&) const = default;
};

struct InitialSpec {
    double ell0 = 1.0;
    FunctionSpec y0;
    FunctionSpec y1;
    bool operator==(const InitialSpec&) const = default;
};

struct TargetSpec {
    double ellbar0 = 1.0;
    FunctionSpec ybar0;
    FunctionSpec ybar1;
    bool operator==(const TargetSpec&) const = default;
};

struct ScenarioConfig {
    double T = 0.0;
    Regularity regularity = Regularity::c01;
    ToughnessSpec toughness;
    InitialSpec initial;
    std::optional<TargetSpec> target;
    std::optional<FunctionSpec> control;
    double h = 1e-3;
    Scheme scheme = Scheme::heun;
    double speed_clamp_eps = 1e-9;
    BranchMode policy = BranchMode::prefer_static;
    bool static_branch = false;
    VerifyTolerances tolerances;
    std::string output = "out";
    /// Directory that relative file references resolve against; not serialized.
    std::filesystem::path base_dir;

    SolverConfig solver() const;
    BranchPolicy branch_policy() const;
    InitialState build_initial() const;
    /// ConfigError if the config has no target.
    TargetState build_target() const;
    /// ConfigError if the config has no control.
    ControlSignal build_control() const;
};

bool operator==(const VerifyTolerances& a, const VerifyTolerances& b);
bool same_scenario(const ScenarioConfig& a, const ScenarioConfig& b);

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
std::string emit_config(const ScenarioConfig& cfg);

Regularity parse_regularity(const std::string& s);
Scheme parse_scheme(const std::string& s);
BranchMode parse_policy(const std::string& s);

}  // namespace debond
