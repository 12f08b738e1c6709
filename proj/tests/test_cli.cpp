#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "hyw/cli.hpp"
#include "hyw/error.hpp"

using namespace hyw;
namespace fs = std::filesystem;

namespace {

std::string body_of(const std::string& report) {
    const auto first = report.find('\n');
    const auto second = report.find('\n', first + 1);
    return report.substr(second + 1);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(HYW_TOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("hyw_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

RunConfig small_config() {
    RunConfig c;
    c.fixtures = 2;
    c.synthetic_kernels = 50;
    c.measure_pairs = 10;
    c.semi_invariance_elements = 4;
    c.p = {1.5, 2.0};
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.resolved_grid_n() == 128);
    c.group = "heisenberg";
    CHECK(c.resolved_grid_n() == 64);
    c.p = {3.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.p = {1.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.p = {1.5};
    c.grid_h = 100;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.grid_h = 128;
    c.checks = {"plancherel", "bogus"};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.checks = {"all"};
    c.lambda_points = 33;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.lambda_points = 64;
    c.group = "sl2";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("check selection") {
    RunConfig c;
    const auto axb = c.selected_checks();
    CHECK(std::find(axb.begin(), axb.end(), "nilpotent-bound") == axb.end());
    CHECK(axb.size() == check_names().size() - 1);
    c.group = "heisenberg";
    CHECK(c.selected_checks().size() == check_names().size());
    c.checks = {};
    CHECK(c.selected_checks().empty());
}

TEST_CASE("JSON config") {
    RunConfig c;
    apply_config_json(c, nlohmann::json::parse(R"({"group": "heisenberg", "p": [1.2, 1.8], "seed": 9, "fixtures": 3})"));
    CHECK(c.group == "heisenberg");
    CHECK(c.p == std::vector<double>{1.2, 1.8});
    CHECK(c.seed == 9);
    CHECK_THROWS_AS(apply_config_json(c, nlohmann::json::parse(R"({"grids": 3})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(c, nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);

    const fs::path d = scratch_dir("config");
    std::ofstream(d / "c.json") << R"({"p": [1.5], "constants": "classical"})";
    const RunConfig loaded = load_config_file(d / "c.json");
    CHECK(loaded.constants == ConstantRegime::classical);
    std::ofstream(d / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_config_file(d / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config_file(d / "missing.json"), ConfigError);
    fs::remove_all(d);
}

TEST_CASE("empty selection gives an empty passing report") {
    RunConfig c;
    c.checks = {};
    const Report r = run_suite(c, 1);
    CHECK(r.records.empty());
    CHECK(r.summary.records == 0);
    CHECK(r.all_pass());
}

TEST_CASE("default ax+b suite passes with every applicable family") {
    RunConfig c;
    const Report r = run_suite(c, 1);
    CHECK(r.all_pass());
    std::set<std::string> families;
    for (const CheckResult& x : r.records) {
        families.insert(x.name);
    }
    CHECK(families.size() >= 6);
    CHECK(families.size() == c.selected_checks().size());
}

TEST_CASE("report body is deterministic across runs and thread counts") {
    const RunConfig c = small_config();
    const std::string a = format_report(run_suite(c, 1));
    const std::string b = format_report(run_suite(c, 3));
    CHECK(a.rfind("HYWREPORT 1\n", 0) == 0);
    CHECK(body_of(a) == body_of(b));
    CHECK(body_of(a).find("runtime") == std::string::npos);

    const fs::path d = scratch_dir("report");
    Report r = run_suite(c, 1);
    write_report_atomic(r, d / "out.jsonl");
    CHECK(body_of(slurp(d / "out.jsonl")) == body_of(a));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) {
        ++files;
    }
    CHECK(files == 1);
    fs::remove_all(d);
}

TEST_CASE("explain") {
    CHECK(explain("plancherel").find("Plancherel") != std::string::npos);
    CHECK(explain("proof-chain").find("Minkowski") != std::string::npos);
    for (const std::string& n : check_names()) {
        CHECK_FALSE(explain(n).empty());
    }
    try {
        explain("nope");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("semi-invariance") != std::string::npos);
    }
}

TEST_CASE("fixture export") {
    const fs::path d = scratch_dir("fixtures");
    RunConfig c;
    c.fixtures = 3;
    const fs::path manifest = write_fixtures(c, d);
    const auto j = nlohmann::json::parse(slurp(manifest));
    REQUIRE(j["fixtures"].size() == 3);
    for (const auto& f : j["fixtures"]) {
        CHECK(fs::exists(d / f["file"].get<std::string>()));
        CHECK(f["checksum_fnv1a64"].get<std::string>().size() == 16);
    }
    fs::remove_all(d);
}

TEST_CASE("exit codes") {
    const fs::path d = scratch_dir("exit");
    const std::string out = " --out " + (d / "r.jsonl").string();
    CHECK(run_tool("run --checks none" + out) == 0);
    CHECK(run_tool("run --checks minkowski,russo --p 1.5" + out) == 0);
    CHECK(run_tool("run --p 3" + out) == 2);
    CHECK(run_tool("run --grid-n 100" + out) == 2);
    CHECK(run_tool("run --no-such-flag") == 2);
    CHECK(run_tool("explain plancherel") == 0);
    CHECK(run_tool("explain nope") == 2);
    CHECK(run_tool("run --checks none --config " + (d / "missing.json").string() + out) == 2);
    CHECK(run_tool("run --checks minkowski --p 1.5 --inequality-slack -2" + out) == 2);
    CHECK(std::system(("HYW_THREADS=zero " + std::string(HYW_TOOL) + " run --checks none" + out + " >/dev/null 2>&1").c_str()) != 0);
    // An unattainable equality tolerance makes a check fail.
    CHECK(run_tool("run --checks plancherel --fixtures 1 --equality-tol 1e-12 --no-refinement" + out) == 1);
    fs::remove_all(d);
}
