#include "debond/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <vector>

#include "debond/branch.hpp"
#include "debond/control.hpp"
#include "debond/forward.hpp"
#include "debond/model.hpp"
#include "debond/scenario.hpp"

namespace debond {

namespace {

namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

using Column = std::vector<double>;

/// Rows whose first column does not increase are dropped so every file is a
/// function of its abscissa.
void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<Column>& cols) {
    std::ofstream os(path);
    if (!os) {
        fail(ErrorKind::invalid_argument, "cannot write '" + path.string() + "'");
    }
    for (std::size_t k = 0; k < header.size(); ++k) {
        os << (k ? "," : "") << header[k];
    }
    os << '\n';
    const std::size_t n = cols.front().size();
    double last = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(cols[0][i] > last)) {
            continue;
        }
        last = cols[0][i];
        for (std::size_t k = 0; k < cols.size(); ++k) {
            os << (k ? "," : "") << format_number(cols[k][i]);
        }
        os << '\n';
    }
}

class KeyValueFile {
public:
    void add(const std::string& key, double v) { lines_ += key + "=" + format_number(v) + "\n"; }
    void add(const std::string& key, const std::string& v) { lines_ += key + "=" + v + "\n"; }
    void add(const std::string& key, bool v) { add(key, std::string(v ? "true" : "false")); }
    void write(const fs::path& path) const {
        std::ofstream os(path);
        if (!os) {
            fail(ErrorKind::invalid_argument, "cannot write '" + path.string() + "'");
        }
        os << lines_;
    }

private:
    std::string lines_;
};

void write_front(const fs::path& path, const FrontCurve& front, const char* x_name, const char* v_name) {
    const auto t = front.times();
    const auto x = front.positions();
    const auto v = front.speeds_right();
    write_csv(path, {"t", x_name, v_name}, {Column(t.begin(), t.end()), Column(x.begin(), x.end()),
                                            Column(v.begin(), v.end())});
}

void write_control(const fs::path& path, const ControlSignal& control) {
    const auto t = control.u().abscissae();
    const auto u = control.u().values();
    Column du(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        du[i] = control.uprime()(t[i], i + 1 == t.size() ? Side::left : Side::right);
    }
    write_csv(path, {"t", "u", "uprime"}, {Column(t.begin(), t.end()), Column(u.begin(), u.end()), du});
}

std::vector<double> uniform_grid(double upper, double h) {
    const double n = std::clamp(std::ceil(upper / h), 200.0, 4000.0);
    const auto count = static_cast<std::size_t>(n) + 1;
    std::vector<double> x(count);
    for (std::size_t i = 0; i < count; ++i) {
        x[i] = upper * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    x.back() = upper;
    return x;
}

struct Context {
    ScenarioConfig cfg;
    fs::path out;
    std::ostream& log;
};

int cmd_simulate(Context& c) {
    const InitialState initial = c.cfg.build_initial();
    const ControlSignal control = c.cfg.build_control();
    const Toughness kappa = c.cfg.toughness.build();
    const SolutionRecord sol = solve_front(initial, control, kappa, c.cfg.solver());

    write_front(c.out / "front.csv", sol.front(), "ell", "ell_prime");
    const TraceSamples& tr = sol.trace();
    write_csv(c.out / "trace.csv", {"s", "f", "fprime"}, {tr.s, tr.f, tr.fprime});
    write_control(c.out / "control.csv", control);

    const double T = c.cfg.T;
    const std::vector<double> x = uniform_grid(sol.front().position(T), c.cfg.h);
    const FieldSample st = reconstruct_state(sol, T, x);
    write_csv(c.out / "state_at_T.csv", {"x", "y", "dty", "dxy"}, {x, st.y, st.dty, st.dxy});
    c.log << "ell(T) = " << format_number(sol.front().position(T)) << '\n';
    return exit_ok;
}

int cmd_initial_branch(Context& c) {
    const InitialState initial = c.cfg.build_initial();
    const InitialBranchResult r = solve_initial_branch(initial, c.cfg.toughness.build(), c.cfg.solver());
    write_front(c.out / "initial_branch.csv", r.front, "ell", "ell_prime");
    KeyValueFile kv;
    kv.add("t_star", r.t_star);
    kv.add("ell_star", r.ell_star);
    kv.add("ell_star_prime", r.ell_star_prime);
    kv.add("slope_authoritative", r.slope_authoritative);
    kv.write(c.out / "initial_branch.txt");
    c.log << "t_star = " << format_number(r.t_star) << '\n';
    return exit_ok;
}

BranchResult final_branch(const ScenarioConfig& cfg, const TargetState& target, const Toughness& kappa) {
    if (cfg.static_branch) {
        return static_final_branch(target, kappa, cfg.T, cfg.h);
    }
    return solve_final_branch(target, kappa, cfg.T, cfg.branch_policy());
}

void write_branch(const fs::path& dir, const BranchResult& b) {
    write_front(dir / "branch.csv", b.script_l, "L", "L_prime");
    Column t, Y, K, v, adm;
    for (const auto& n : b.nodes) {
        t.push_back(n.t);
        Y.push_back(n.Y);
        K.push_back(n.K);
        v.push_back(n.speed);
        adm.push_back(n.static_admissible ? 1.0 : 0.0);
    }
    if (!t.empty()) {
        write_csv(dir / "branch_nodes.csv", {"t", "Y", "K", "L_prime", "static_admissible"}, {t, Y, K, v, adm});
    }
}

int cmd_final_branch(Context& c) {
    const TargetState target = c.cfg.build_target();
    const BranchResult b = final_branch(c.cfg, target, c.cfg.toughness.build());
    write_branch(c.out, b);
    KeyValueFile kv;
    kv.add("t_bar_star", b.t_bar_star);
    kv.add("ell_bar_star", b.ell_bar_star);
    kv.add("ell_bar_star_prime", b.ell_bar_star_prime);
    kv.add("alpha", b.alpha);
    kv.add("static", b.is_static);
    kv.write(c.out / "branch.txt");
    c.log << "t_bar_star = " << format_number(b.t_bar_star) << '\n';
    return exit_ok;
}

int cmd_check_admissible(Context& c) {
    const TargetState target = c.cfg.build_target();
    const Toughness kappa = c.cfg.toughness.build();
    const double tol = sampled_tolerance(c.cfg.h);

    std::vector<Check> checks = check_final_set(target, kappa, tol).checks;
    if (c.cfg.regularity == Regularity::c1) {
        // The residual column carries alpha for this row.
        Check cls{"terminal_class", 0.0, true};
        try {
            cls.residual = classify_final_state(target, kappa, tol).alpha;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::incompatible_target) {
                throw;
            }
            cls.residual = NAN;
            cls.pass = false;
        }
        checks.push_back(cls);
    }
    const DampingReport d = check_damping_bound(target, kappa);
    checks.push_back({"damping", d.worst_violation, d.pass});
    if (c.cfg.static_branch) {
        const double margin = 2.0 * target.ellbar0() - c.cfg.T;
        checks.push_back({"static_time", margin, margin < 0.0});
    }

    std::ofstream os(c.out / "admissibility.csv");
    os << "check,pass,residual\n";
    bool all = true;
    for (const auto& ch : checks) {
        os << ch.name << ',' << (ch.pass ? 1 : 0) << ',' << format_number(ch.residual) << '\n';
        c.log << (ch.pass ? "pass " : "FAIL ") << ch.name << " residual=" << format_number(ch.residual) << '\n';
        all = all && ch.pass;
    }
    return all ? exit_ok : exit_check_failed;
}

SynthesisReport synthesize(const ScenarioConfig& cfg, const InitialState& initial, const TargetState& target,
                           const Toughness& kappa) {
    const SolverConfig solver = cfg.solver();
    const bool c1 = cfg.regularity == Regularity::c1;
    if (cfg.static_branch) {
        return c1 ? synthesize_static_c1(initial, target, kappa, cfg.T, solver)
                  : synthesize_static_c01(initial, target, kappa, cfg.T, solver);
    }
    const BranchResult b = solve_final_branch(target, kappa, cfg.T, cfg.branch_policy());
    return c1 ? synthesize_c1(initial, target, kappa, cfg.T, b, solver)
              : synthesize_c01(initial, target, kappa, cfg.T, b, solver);
}

void write_plan(const fs::path& path, const SynthesisReport& r) {
    const InflationPlan& p = r.plan;
    KeyValueFile kv;
    kv.add("case", std::string(to_string(p.plan_case)));
    kv.add("regularity", std::string(to_string(r.regularity)));
    kv.add("v", p.v);
    kv.add("delta", p.delta);
    kv.add("t_circ", p.t_circ);
    kv.add("t_star", p.t_star);
    kv.add("ell_star", p.ell_star);
    kv.add("ell_star_prime", p.ell_star_prime);
    kv.add("t_bar_star", p.t_bar_star);
    kv.add("ell_bar_star", p.ell_bar_star);
    kv.add("ell_bar_star_prime", p.ell_bar_star_prime);
    kv.add("alpha", r.branch.alpha);
    kv.add("s0", r.stages.s0);
    kv.add("s1", r.stages.s1);
    kv.add("s2", r.stages.s2);
    kv.add("s3", r.stages.s3);
    kv.add("uprime_jump", r.uprime_jump);
    kv.add("speed_jump", r.speed_jump);
    kv.add("junction_residual", r.junction_residual);
    kv.write(path);
}

int cmd_synthesize(Context& c) {
    const InitialState initial = c.cfg.build_initial();
    const TargetState target = c.cfg.build_target();
    const SynthesisReport r = synthesize(c.cfg, initial, target, c.cfg.toughness.build());
    write_control(c.out / "control.csv", r.control);
    write_branch(c.out, r.branch);
    write_plan(c.out / "plan.txt", r);
    c.log << "case = " << to_string(r.plan.plan_case) << '\n';
    return exit_ok;
}

int cmd_verify(Context& c) {
    const InitialState initial = c.cfg.build_initial();
    const TargetState target = c.cfg.build_target();
    const Toughness kappa = c.cfg.toughness.build();
    VerifyReport v;
    if (c.cfg.control) {
        v = verify_control(initial, c.cfg.build_control(), target, kappa, c.cfg.T, c.cfg.solver(), c.cfg.tolerances);
    } else {
        const SynthesisReport r = synthesize(c.cfg, initial, target, kappa);
        write_control(c.out / "control.csv", r.control);
        write_plan(c.out / "plan.txt", r);
        v = verify_synthesis(r, initial, target, kappa, c.cfg.solver(), c.cfg.tolerances);
    }
    const VerifyTolerances& tol = c.cfg.tolerances;
    struct Row {
        const char* name;
        double value, tolerance;
    };
    const Row rows[] = {{"length_error", v.length_error, tol.length},
                        {"displacement_error", v.displacement_error, tol.displacement},
                        {"velocity_error", v.velocity_error, tol.velocity}};
    std::ofstream os(c.out / "verify.csv");
    os << "metric,value,tolerance,pass\n";
    for (const Row& r : rows) {
        const bool ok = r.value <= r.tolerance;
        os << r.name << ',' << format_number(r.value) << ',' << format_number(r.tolerance) << ',' << (ok ? 1 : 0)
           << '\n';
        c.log << (ok ? "pass " : "FAIL ") << r.name << '=' << format_number(r.value) << '\n';
    }
    return v.pass ? exit_ok : exit_check_failed;
}

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::infeasible_time: return 4;
        case ErrorKind::dead_end:
        case ErrorKind::constraint_violated:
        case ErrorKind::c1_switch_violation:
        case ErrorKind::no_termination: return 5;
        case ErrorKind::continuity_failure: return 6;
        default: return exit_solver;
    }
}

int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    using Handler = int (*)(Context&);
    static const std::pair<const char*, Handler> commands[] = {
        {"simulate", cmd_simulate},         {"initial-branch", cmd_initial_branch},
        {"final-branch", cmd_final_branch}, {"check-admissible", cmd_check_admissible},
        {"synthesize", cmd_synthesize},     {"verify", cmd_verify},
    };
    Handler handler = nullptr;
    for (const auto& [name, fn] : commands) {
        if (opts.command == name) {
            handler = fn;
        }
    }
    if (!handler) {
        err << "error: unknown command '" << opts.command << "'\n";
        return exit_config;
    }
    try {
        ScenarioConfig cfg = load_config(opts.config);
        if (opts.h) {
            if (!(*opts.h > 0.0)) {
                throw ConfigError("h", "must be positive");
            }
            cfg.h = *opts.h;
        }
        if (opts.policy) {
            cfg.policy = parse_policy(*opts.policy);
        }
        const fs::path dir = opts.out ? *opts.out : fs::path(cfg.output);
        fs::create_directories(dir);
        Context ctx{std::move(cfg), dir, out};
        return handler(ctx);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_solver;
    }
}

}  // namespace debond
