#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "debond/cli.hpp"
#include "debond/scenario.hpp"
#include "doctest.h"

using namespace debond;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("debond_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / (name + ".json");
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string err;
};

Run run(const std::string& command, const fs::path& config, const fs::path& out, const std::string& extra = "") {
    const char* exe = std::getenv("DEBOND_EXE");
    REQUIRE_MESSAGE(exe != nullptr, "DEBOND_EXE is not set");
    const fs::path err = out.string() + ".stderr";
    fs::create_directories(out.parent_path());
    const std::string cmd = std::string("\"") + exe + "\" " + command + " --config \"" + config.string() +
                            "\" --out \"" + out.string() + "\" " + extra + " >/dev/null 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::vector<std::vector<double>> read_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

std::map<std::string, std::string> read_kv(const fs::path& p) {
    std::ifstream in(p);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::map<std::string, double> read_metrics(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::map<std::string, double> m;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string name, value;
        std::getline(ls, name, ',');
        std::getline(ls, value, ',');
        m[name] = std::stod(value);
    }
    return m;
}

void require_increasing(const fs::path& p) {
    const auto rows = read_rows(p);
    REQUIRE(rows.size() >= 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i][0] > rows[i - 1][0]);
    }
}

const char* zero_config = R"({"T": 3, "initial": {"ell0": 1}, "target": {"ellbar0": 1},
  "control": {"preset": "constant", "c": 0}, "branch": {"static": true}})";

const char* expansion_config = R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2},
  "branch": {"static": true}})";

}  // namespace

TEST_CASE("missing horizon is a config error naming the field") {
    const auto cfg = write_config("no_t", R"({"initial": {"ell0": 1}})");
    const Run r = run("simulate", cfg, work_dir() / "no_t");
    CHECK(r.code == 2);
    CHECK(r.err.find("T") != std::string::npos);
}

TEST_CASE("unknown fields and bad types are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"T": 1, "initial": {"ell0": 1}, "colour": 2})"), ConfigError);
    try {
        parse_config(R"({"T": "six", "initial": {"ell0": 1}})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "T");
    }
    try {
        parse_config(R"({"T": 1, "initial": {"ell0": 1, "y0": {"preset": "cubic"}}})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "initial.y0.preset");
    }
}

TEST_CASE("simulate at rest keeps the front still") {
    const auto out = work_dir() / "sim_zero";
    REQUIRE(run("simulate", write_config("sim_zero", zero_config), out).code == 0);
    for (const auto& row : read_rows(out / "front.csv")) {
        CHECK(row[1] == 1.0);
    }
    for (const char* f : {"front.csv", "trace.csv", "control.csv", "state_at_T.csv"}) {
        require_increasing(out / f);
    }
}

TEST_CASE("simulate at constant speed ends at 4") {
    const auto cfg = write_config("sim_cs", R"({"T": 6, "toughness": {"constant": 0.5},
      "initial": {"ell0": 1, "y1": {"preset": "constant", "c": 2}},
      "control": {"preset": "constant", "c": 0}, "solver": {"h": 0.001}})");
    const auto out = work_dir() / "sim_cs";
    REQUIRE(run("simulate", cfg, out).code == 0);
    const auto rows = read_rows(out / "front.csv");
    CHECK(rows.back()[0] == doctest::Approx(6.0));
    CHECK(std::abs(rows.back()[1] - 4.0) <= 5e-3);

    const auto ib = work_dir() / "ib_cs";
    REQUIRE(run("initial-branch", cfg, ib).code == 0);
    CHECK(std::abs(std::stod(read_kv(ib / "initial_branch.txt")["t_star"]) - 2.5) <= 5e-3);
}

TEST_CASE("check-admissible") {
    SUBCASE("outgoing-free target passes") {
        const auto cfg = write_config("adm_ok", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2,
          "ybar0": {"preset": "linear", "a": 1, "b": -0.5}, "ybar1": {"preset": "constant", "c": 0.5}}})");
        CHECK(run("check-admissible", cfg, work_dir() / "adm_ok").code == 0);
    }
    SUBCASE("loud target fails the damping check by 2") {
        const auto cfg = write_config("adm_loud", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2,
          "ybar1": {"preset": "constant", "c": 2}}})");
        const auto out = work_dir() / "adm_loud";
        CHECK(run("check-admissible", cfg, out).code == 1);
        const std::string csv = slurp(out / "admissibility.csv");
        CHECK(csv.find("damping,0,2\n") != std::string::npos);
    }
    SUBCASE("nonzero end value fails the final-set check") {
        const auto cfg = write_config("adm_end", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2,
          "ybar0": {"preset": "constant", "c": 1}}})");
        const auto out = work_dir() / "adm_end";
        CHECK(run("check-admissible", cfg, out).code == 1);
        CHECK(slurp(out / "admissibility.csv").find("ybar0(ellbar0)=0,0,") != std::string::npos);
    }
}

TEST_CASE("synthesize writes the plan") {
    SUBCASE("zero to zero") {
        const auto out = work_dir() / "syn_zero";
        REQUIRE(run("synthesize", write_config("syn_zero", zero_config), out).code == 0);
        CHECK(read_kv(out / "plan.txt")["case"] == "static_match");
    }
    SUBCASE("expansion") {
        const auto out = work_dir() / "syn_exp";
        REQUIRE(run("synthesize", write_config("syn_exp", expansion_config), out).code == 0);
        const auto kv = read_kv(out / "plan.txt");
        CHECK(std::stod(kv.at("v")) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(std::stod(kv.at("s1")) == doctest::Approx(2.0));
        CHECK(std::stod(kv.at("s2")) == doctest::Approx(4.0));
        require_increasing(out / "control.csv");
        require_increasing(out / "branch.csv");
    }
    SUBCASE("horizon exactly twice the target length") {
        const auto cfg = write_config("syn_edge", R"({"T": 4, "initial": {"ell0": 1}, "target": {"ellbar0": 2},
          "branch": {"static": true}})");
        CHECK(run("synthesize", cfg, work_dir() / "syn_edge").code == 4);
    }
    SUBCASE("loud static target") {
        const auto cfg = write_config("syn_loud", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2,
          "ybar1": {"preset": "constant", "c": 2}}, "branch": {"static": true}})");
        CHECK(run("synthesize", cfg, work_dir() / "syn_loud").code == 5);
    }
}

TEST_CASE("verify") {
    SUBCASE("zero to zero is exact") {
        const auto out = work_dir() / "ver_zero";
        REQUIRE(run("verify", write_config("ver_zero", zero_config), out).code == 0);
        for (const auto& [name, value] : read_metrics(out / "verify.csv")) {
            CHECK(value <= 1e-10);
        }
    }
    SUBCASE("expansion round trip, then a corrupted replay") {
        const auto out = work_dir() / "ver_exp";
        REQUIRE(run("verify", write_config("ver_exp", expansion_config), out, "--h 0.001").code == 0);
        CHECK(read_metrics(out / "verify.csv").at("displacement_error") <= 1e-2);

        const auto replay = write_config("ver_replay", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2},
          "control": {"file": "ver_exp/control.csv"}})");
        CHECK(run("verify", replay, work_dir() / "ver_replay").code == 0);

        // Shift u by 0.2 on the second half.
        const auto rows = read_rows(out / "control.csv");
        fs::create_directories(work_dir() / "bad");
        std::ofstream bad(work_dir() / "bad" / "control.csv");
        bad << "t,u\n";
        bad.precision(17);
        for (const auto& r : rows) {
            bad << r[0] << ',' << r[1] + (r[0] > 3.0 ? 0.2 : 0.0) << '\n';
        }
        bad.close();
        const auto corrupt = write_config("ver_bad", R"({"T": 6, "initial": {"ell0": 1}, "target": {"ellbar0": 2},
          "control": {"file": "bad/control.csv"}})");
        const auto bad_out = work_dir() / "ver_bad";
        CHECK(run("verify", corrupt, bad_out).code == 1);
        CHECK(read_metrics(bad_out / "verify.csv").at("displacement_error") > 1e-2);
    }
}

TEST_CASE("config round trip") {
    const std::string text = R"({"T": 7.25, "regularity": "c1",
      "toughness": {"samples": [[0, 1], [3, 1.5], [10, 2]], "bounds": [1, 2]},
      "initial": {"ell0": 1.5, "y0": {"preset": "linear", "a": 0.3, "b": -0.2, "resolution": 17},
                  "y1": {"samples": [[0, 0.1], [0.75, 0.3333333333333333], [1.5, 0]]}},
      "target": {"ellbar0": 2, "ybar0": {"preset": "sine", "A": 0.1, "omega": 1.5707963267948966, "phi": 3.14159},
                 "ybar1": {"preset": "constant", "c": 0}},
      "control": {"preset": "sine", "A": 0.2, "omega": 0.1},
      "solver": {"h": 0.002, "scheme": "euler", "speed_clamp_eps": 1e-10},
      "branch": {"policy": "prefer_moving", "static": false},
      "verify": {"length": 0.02, "displacement": 0.03, "velocity": 0.4}, "output": "results"})";
    const ScenarioConfig a = parse_config(text);
    const ScenarioConfig b = parse_config(emit_config(a));
    CHECK(same_scenario(a, b));
    CHECK(emit_config(b) == emit_config(a));

    const auto close = [](const SampledFunction& f, const SampledFunction& g) {
        REQUIRE(f.size() == g.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(std::abs(f.values()[i] - g.values()[i]) <= 1e-15);
        }
    };
    close(a.build_initial().y0(), b.build_initial().y0());
    close(a.build_initial().y1(), b.build_initial().y1());
    close(a.build_target().ybar0(), b.build_target().ybar0());
    close(a.build_control().u(), b.build_control().u());
}

TEST_CASE("identical configs give identical files") {
    const auto cfg = write_config("det", expansion_config);
    REQUIRE(run("synthesize", cfg, work_dir() / "det1").code == 0);
    REQUIRE(run("synthesize", cfg, work_dir() / "det2").code == 0);
    for (const char* f : {"control.csv", "branch.csv", "plan.txt"}) {
        CHECK(slurp(work_dir() / "det1" / f) == slurp(work_dir() / "det2" / f));
    }
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorKind::infeasible_time) == 4);
    CHECK(exit_code_for(ErrorKind::dead_end) == 5);
    CHECK(exit_code_for(ErrorKind::constraint_violated) == 5);
    CHECK(exit_code_for(ErrorKind::continuity_failure) == 6);
    CHECK(exit_code_for(ErrorKind::step_too_large) == 3);
    CHECK(format_number(0.1) == "0.10000000000000001");
}
