#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyw/cli.hpp"
#include "hyw/error.hpp"
#include "hyw/parallel.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Overrides {
    std::string config;
    std::optional<std::string> group;
    std::vector<double> p;
    std::optional<std::size_t> grid_n;
    std::optional<std::size_t> grid_h;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> checks;
    std::optional<std::string> constants;
    std::optional<std::string> out;
    std::optional<std::size_t> fixtures;
    std::optional<std::size_t> lambda_points;
    std::optional<double> equality_tol;
    std::optional<double> inequality_slack;
    std::optional<std::string> dump_dir;
    bool no_refinement = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON config file; flags override its values");
        app->add_option("--group", group, "axb or heisenberg");
        app->add_option("--p", p, "exponents in (1, 2]; repeat or comma-separate")->delimiter(',');
        app->add_option("--grid-n", grid_n, "points per N axis (power of two)");
        app->add_option("--grid-h", grid_h, "points on the H axis (power of two)");
        app->add_option("--seed", seed, "fixture seed");
        app->add_option("--checks", checks, "check families, 'all', or 'none'")->delimiter(',');
        app->add_option("--constants", constants, "sharp or classical");
        app->add_option("--out", out, "report path");
        app->add_option("--fixtures", fixtures, "number of test functions");
        app->add_option("--lambda-points", lambda_points, "Heisenberg transversal samples");
        app->add_option("--equality-tol", equality_tol, "relative tolerance of equality checks");
        app->add_option("--inequality-slack", inequality_slack, "relative slack of inequality checks");
        app->add_option("--dump-dir", dump_dir, "directory for fixtures that break a chain link");
        app->add_flag("--no-refinement", no_refinement, "skip the refined-grid clause of equality checks");
    }

    hyw::RunConfig resolve() const {
        hyw::RunConfig c = config.empty() ? hyw::RunConfig{} : hyw::load_config_file(config);
        if (group) c.group = *group;
        if (!p.empty()) c.p = p;
        if (grid_n) c.grid_n = *grid_n;
        if (grid_h) c.grid_h = *grid_h;
        if (seed) c.seed = *seed;
        if (!checks.empty()) {
            c.checks = checks;
            if (checks.size() == 1 && checks.front() == "none") {
                c.checks.clear();
            }
        }
        if (constants) {
            if (*constants != "sharp" && *constants != "classical") {
                throw hyw::ConfigError("constants must be 'sharp' or 'classical'");
            }
            c.constants = *constants == "sharp" ? hyw::ConstantRegime::sharp : hyw::ConstantRegime::classical;
        }
        if (out) c.out = *out;
        if (fixtures) c.fixtures = *fixtures;
        if (lambda_points) c.lambda_points = *lambda_points;
        if (equality_tol) c.equality_tolerance = *equality_tol;
        if (inequality_slack) c.inequality_slack = *inequality_slack;
        if (dump_dir) c.dump_dir = *dump_dir;
        if (no_refinement) c.refinement = false;
        c.validate();
        return c;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyw: operator-valued Fourier transform workbench"};
    app.require_subcommand(1);

    Overrides run_opts;
    CLI::App* run = app.add_subcommand("run", "run the verification suite and write a report");
    run_opts.attach(run);

    std::string explain_name;
    CLI::App* explain = app.add_subcommand("explain", "describe a check family");
    explain->add_option("check", explain_name, "check name")->required();

    Overrides fixture_opts;
    std::string fixture_dir = "fixtures";
    CLI::App* fixtures = app.add_subcommand("fixtures", "regenerate fixture files with a provenance manifest");
    fixture_opts.attach(fixtures);
    fixtures->add_option("--dir", fixture_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*explain) {
            std::cout << hyw::explain(explain_name);
            return kExitPass;
        }
        if (*fixtures) {
            const hyw::RunConfig c = fixture_opts.resolve();
            std::cout << hyw::write_fixtures(c, fixture_dir).string() << '\n';
            return kExitPass;
        }
        const hyw::RunConfig c = run_opts.resolve();
        const unsigned threads = hyw::default_thread_count();
        const hyw::Report report = hyw::run_suite(c, threads);
        hyw::write_report_atomic(report, c.out);
        std::cout << report.summary.passed << "/" << report.summary.records << " checks passed; report "
                  << c.out.string() << '\n';
        return report.all_pass() ? kExitPass : kExitFail;
    } catch (const hyw::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
