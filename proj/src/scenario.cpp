#include "debond/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace debond {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) {
            known = known || it.key() == k;
        }
        if (!known) {
            throw ConfigError(join(path, it.key()), "unknown field");
        }
    }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(join(path, key), "missing field");
    }
    return *it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(field, "must be finite");
    }
    return x;
}

double number_at(const json& j, const std::string& path, const std::string& key) {
    return number(require(j, path, key), join(path, key));
}

double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
    return j.contains(key) ? number(j.at(key), join(path, key)) : fallback;
}

std::string string_at(const json& j, const std::string& path, const std::string& key) {
    const auto& v = require(j, path, key);
    if (!v.is_string()) {
        throw ConfigError(join(path, key), "expected a string");
    }
    return v.get<std::string>();
}

void table(const json& v, const std::string& field, std::vector<double>& xs, std::vector<double>& ys) {
    if (!v.is_array() || v.size() < 2) {
        throw ConfigError(field, "expected at least two [x, value] pairs");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) {
            throw ConfigError(f, "expected an [x, value] pair");
        }
        xs.push_back(number(v[i][0], f));
        ys.push_back(number(v[i][1], f));
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw ConfigError(f, "abscissae must increase strictly");
        }
    }
}

json table_json(const std::vector<double>& xs, const std::vector<double>& ys) {
    json out = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.push_back(json::array({xs[i], ys[i]}));
    }
    return out;
}

FunctionSpec parse_function(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected a function object");
    }
    FunctionSpec f;
    if (j.contains("samples")) {
        only_keys(j, path, {"samples"});
        f.kind = FunctionSpec::Kind::samples;
        table(j.at("samples"), join(path, "samples"), f.xs, f.ys);
        return f;
    }
    if (j.contains("file")) {
        only_keys(j, path, {"file"});
        f.kind = FunctionSpec::Kind::file;
        f.path = string_at(j, path, "file");
        return f;
    }
    const std::string preset = string_at(j, path, "preset");
    if (j.contains("resolution")) {
        const double r = number(j.at("resolution"), join(path, "resolution"));
        if (!(r >= 2.0) || r != std::floor(r)) {
            throw ConfigError(join(path, "resolution"), "must be an integer >= 2");
        }
        f.resolution = static_cast<std::size_t>(r);
    }
    if (preset == "constant") {
        only_keys(j, path, {"preset", "resolution", "c"});
        f.kind = FunctionSpec::Kind::constant;
        f.c = number_at(j, path, "c");
    } else if (preset == "linear") {
        only_keys(j, path, {"preset", "resolution", "a", "b"});
        f.kind = FunctionSpec::Kind::linear;
        f.a = number_at(j, path, "a");
        f.b = number_at(j, path, "b");
    } else if (preset == "sine") {
        only_keys(j, path, {"preset", "resolution", "A", "omega", "phi"});
        f.kind = FunctionSpec::Kind::sine;
        f.A = number_at(j, path, "A");
        f.omega = number_at(j, path, "omega");
        f.phi = number_or(j, path, "phi", 0.0);
    } else {
        throw ConfigError(join(path, "preset"), "unknown preset '" + preset + "'");
    }
    return f;
}

json function_json(const FunctionSpec& f) {
    json j;
    switch (f.kind) {
        case FunctionSpec::Kind::samples: j["samples"] = table_json(f.xs, f.ys); return j;
        case FunctionSpec::Kind::file: j["file"] = f.path; return j;
        case FunctionSpec::Kind::constant:
            j["preset"] = "constant";
            j["c"] = f.c;
            break;
        case FunctionSpec::Kind::linear:
            j["preset"] = "linear";
            j["a"] = f.a;
            j["b"] = f.b;
            break;
        case FunctionSpec::Kind::sine:
            j["preset"] = "sine";
            j["A"] = f.A;
            j["omega"] = f.omega;
            j["phi"] = f.phi;
            break;
    }
    j["resolution"] = f.resolution;
    return j;
}

void read_csv_columns(const std::filesystem::path& file, const std::string& field, std::vector<double>& xs,
                      std::vector<double>& ys) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError(field, "cannot open '" + file.string() + "'");
    }
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
            throw ConfigError(field, "row " + std::to_string(row) + " has fewer than two columns");
        }
        char* end = nullptr;
        const double x = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            if (row == 1) {
                continue;  // header
            }
            throw ConfigError(field, "row " + std::to_string(row) + " is not numeric");
        }
        const double y = std::strtod(b.c_str(), &end);
        if (!xs.empty() && !(x > xs.back())) {
            throw ConfigError(field, "row " + std::to_string(row) + ": abscissae must increase strictly");
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 2) {
        throw ConfigError(field, "need at least two rows in '" + file.string() + "'");
    }
}

}  // namespace

FunctionSpec FunctionSpec::constant(double value) {
    FunctionSpec f;
    f.kind = Kind::constant;
    f.c = value;
    return f;
}

SampledFunction FunctionSpec::materialize(double lower, double upper, const std::filesystem::path& base,
                                          const std::string& field) const {
    if (kind == Kind::samples || kind == Kind::file) {
        std::vector<double> x = xs, y = ys;
        if (kind == Kind::file) {
            x.clear();
            y.clear();
            const std::filesystem::path p(path);
            read_csv_columns(p.is_absolute() ? p : base / p, field, x, y);
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(upper));
        if (x.front() > lower + slack || x.back() < upper - slack) {
            std::ostringstream os;
            os.precision(17);
            os << "table covers [" << x.front() << ", " << x.back() << "], need [" << lower << ", " << upper << "]";
            throw ConfigError(field, os.str());
        }
        return SampledFunction(std::move(x), std::move(y));
    }
    auto fn = [this](double x) {
        switch (kind) {
            case Kind::constant: return c;
            case Kind::linear: return a + b * x;
            case Kind::sine: return A * std::sin(omega * x + phi);
            default: return 0.0;
        }
    };
    return SampledFunction::sample(fn, lower, upper, resolution);
}

Toughness ToughnessSpec::build() const {
    if (value) {
        return Toughness::constant(*value);
    }
    SampledFunction s(xs, ys);
    if (lower_bound && upper_bound) {
        return Toughness::sampled(std::move(s), *lower_bound, *upper_bound);
    }
    return Toughness::sampled(std::move(s));
}

SolverConfig ScenarioConfig::solver() const {
    SolverConfig c;
    c.h = h;
    c.scheme = scheme;
    c.speed_clamp_eps = speed_clamp_eps;
    c.T = T;
    return c;
}

BranchPolicy ScenarioConfig::branch_policy() const {
    BranchPolicy p;
    p.mode = policy;
    p.c1_mode = regularity == Regularity::c1;
    p.h = h;
    return p;
}

InitialState ScenarioConfig::build_initial() const {
    return InitialState(initial.ell0, initial.y0.materialize(0.0, initial.ell0, base_dir, "initial.y0"),
                        initial.y1.materialize(0.0, initial.ell0, base_dir, "initial.y1"), regularity);
}

TargetState ScenarioConfig::build_target() const {
    if (!target) {
        throw ConfigError("target", "missing field");
    }
    return TargetState(target->ellbar0, target->ybar0.materialize(0.0, target->ellbar0, base_dir, "target.ybar0"),
                       target->ybar1.materialize(0.0, target->ellbar0, base_dir, "target.ybar1"), regularity);
}

ControlSignal ScenarioConfig::build_control() const {
    if (!control) {
        throw ConfigError("control", "missing field");
    }
    return ControlSignal::from_samples(control->materialize(0.0, T, base_dir, "control"), regularity);
}

Regularity parse_regularity(const std::string& s) {
    if (s == "c01" || s == "C01") {
        return Regularity::c01;
    }
    if (s == "c1" || s == "C1") {
        return Regularity::c1;
    }
    throw ConfigError("regularity", "expected 'c01' or 'c1', got '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "heun") {
        return Scheme::heun;
    }
    if (s == "euler") {
        return Scheme::euler;
    }
    throw ConfigError("solver.scheme", "expected 'heun' or 'euler', got '" + s + "'");
}

BranchMode parse_policy(const std::string& s) {
    if (s == "prefer_static") {
        return BranchMode::prefer_static;
    }
    if (s == "prefer_moving") {
        return BranchMode::prefer_moving;
    }
    throw ConfigError("branch.policy", "expected 'prefer_static' or 'prefer_moving', got '" + s + "'");
}

bool operator==(const VerifyTolerances& a, const VerifyTolerances& b) {
    return a.length == b.length && a.displacement == b.displacement && a.velocity == b.velocity;
}

bool same_scenario(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.T == b.T && a.regularity == b.regularity && a.toughness == b.toughness && a.initial == b.initial &&
           a.target == b.target && a.control == b.control && a.h == b.h && a.scheme == b.scheme &&
           a.speed_clamp_eps == b.speed_clamp_eps && a.policy == b.policy && a.static_branch == b.static_branch &&
           a.tolerances == b.tolerances && a.output == b.output;
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config", "expected a JSON object");
    }
    only_keys(j, "", {"T", "regularity", "toughness", "initial", "target", "control", "solver", "branch", "verify",
                      "output"});
    ScenarioConfig c;
    c.base_dir = base_dir;
    c.T = number_at(j, "", "T");
    if (!(c.T > 0.0)) {
        throw ConfigError("T", "must be positive");
    }
    if (j.contains("regularity")) {
        c.regularity = parse_regularity(string_at(j, "", "regularity"));
    }

    if (j.contains("toughness")) {
        const auto& t = j.at("toughness");
        if (!t.is_object()) {
            throw ConfigError("toughness", "expected an object");
        }
        only_keys(t, "toughness", {"constant", "samples", "bounds"});
        if (t.contains("constant")) {
            c.toughness.value = number(t.at("constant"), "toughness.constant");
            if (!(*c.toughness.value > 0.0)) {
                throw ConfigError("toughness.constant", "must be positive");
            }
        } else {
            c.toughness.value.reset();
            table(require(t, "toughness", "samples"), "toughness.samples", c.toughness.xs, c.toughness.ys);
            if (t.contains("bounds")) {
                const auto& b = t.at("bounds");
                if (!b.is_array() || b.size() != 2) {
                    throw ConfigError("toughness.bounds", "expected [lower, upper]");
                }
                c.toughness.lower_bound = number(b[0], "toughness.bounds");
                c.toughness.upper_bound = number(b[1], "toughness.bounds");
            }
        }
    }

    const auto& ini = require(j, "", "initial");
    only_keys(ini, "initial", {"ell0", "y0", "y1"});
    c.initial.ell0 = number_at(ini, "initial", "ell0");
    if (!(c.initial.ell0 > 0.0)) {
        throw ConfigError("initial.ell0", "must be positive");
    }
    c.initial.y0 = ini.contains("y0") ? parse_function(ini.at("y0"), "initial.y0") : FunctionSpec::constant(0.0);
    c.initial.y1 = ini.contains("y1") ? parse_function(ini.at("y1"), "initial.y1") : FunctionSpec::constant(0.0);

    if (j.contains("target")) {
        const auto& tg = j.at("target");
        only_keys(tg, "target", {"ellbar0", "ybar0", "ybar1"});
        TargetSpec t;
        t.ellbar0 = number_at(tg, "target", "ellbar0");
        if (!(t.ellbar0 > 0.0)) {
            throw ConfigError("target.ellbar0", "must be positive");
        }
        t.ybar0 = tg.contains("ybar0") ? parse_function(tg.at("ybar0"), "target.ybar0") : FunctionSpec::constant(0.0);
        t.ybar1 = tg.contains("ybar1") ? parse_function(tg.at("ybar1"), "target.ybar1") : FunctionSpec::constant(0.0);
        c.target = std::move(t);
    }
    if (j.contains("control")) {
        c.control = parse_function(j.at("control"), "control");
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        if (!s.is_object()) {
            throw ConfigError("solver", "expected an object");
        }
        only_keys(s, "solver", {"h", "scheme", "speed_clamp_eps"});
        c.h = number_or(s, "solver", "h", c.h);
        if (!(c.h > 0.0)) {
            throw ConfigError("solver.h", "must be positive");
        }
        if (s.contains("scheme")) {
            c.scheme = parse_scheme(string_at(s, "solver", "scheme"));
        }
        c.speed_clamp_eps = number_or(s, "solver", "speed_clamp_eps", c.speed_clamp_eps);
    }
    if (j.contains("branch")) {
        const auto& b = j.at("branch");
        if (!b.is_object()) {
            throw ConfigError("branch", "expected an object");
        }
        only_keys(b, "branch", {"policy", "static"});
        if (b.contains("policy")) {
            c.policy = parse_policy(string_at(b, "branch", "policy"));
        }
        if (b.contains("static")) {
            if (!b.at("static").is_boolean()) {
                throw ConfigError("branch.static", "expected true or false");
            }
            c.static_branch = b.at("static").get<bool>();
        }
    }
    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        if (!v.is_object()) {
            throw ConfigError("verify", "expected an object");
        }
        only_keys(v, "verify", {"length", "displacement", "velocity"});
        c.tolerances.length = number_or(v, "verify", "length", c.tolerances.length);
        c.tolerances.displacement = number_or(v, "verify", "displacement", c.tolerances.displacement);
        c.tolerances.velocity = number_or(v, "verify", "velocity", c.tolerances.velocity);
    }
    if (j.contains("output")) {
        c.output = string_at(j, "", "output");
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string emit_config(const ScenarioConfig& c) {
    json j;
    j["T"] = c.T;
    j["regularity"] = c.regularity == Regularity::c1 ? "c1" : "c01";
    if (c.toughness.value) {
        j["toughness"] = {{"constant", *c.toughness.value}};
    } else {
        json t;
        t["samples"] = table_json(c.toughness.xs, c.toughness.ys);
        if (c.toughness.lower_bound && c.toughness.upper_bound) {
            t["bounds"] = json::array({*c.toughness.lower_bound, *c.toughness.upper_bound});
        }
        j["toughness"] = t;
    }
    j["initial"] = {{"ell0", c.initial.ell0}, {"y0", function_json(c.initial.y0)}, {"y1", function_json(c.initial.y1)}};
    if (c.target) {
        j["target"] = {{"ellbar0", c.target->ellbar0},
                       {"ybar0", function_json(c.target->ybar0)},
                       {"ybar1", function_json(c.target->ybar1)}};
    }
    if (c.control) {
        j["control"] = function_json(*c.control);
    }
    j["solver"] = {{"h", c.h}, {"scheme", to_string(c.scheme)}, {"speed_clamp_eps", c.speed_clamp_eps}};
    j["branch"] = {{"policy", to_string(c.policy)}, {"static", c.static_branch}};
    j["verify"] = {{"length", c.tolerances.length},
                   {"displacement", c.tolerances.displacement},
                   {"velocity", c.tolerances.velocity}};
    j["output"] = c.output;
    return j.dump(2) + "\n";
}

}  // namespace debond
