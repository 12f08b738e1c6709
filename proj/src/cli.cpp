#include "hyw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <fftw3.h>

#include "hyw/error.hpp"
#include "hyw/parallel.hpp"

namespace hyw {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        out += (out.empty() ? "" : ", ") + s;
    }
    return out;
}

const char* regime_name(ConstantRegime r) { return r == ConstantRegime::sharp ? "sharp" : "classical"; }

ConstantRegime parse_regime(const std::string& s) {
    if (s == "sharp") {
        return ConstantRegime::sharp;
    }
    if (s == "classical") {
        return ConstantRegime::classical;
    }
    throw ConfigError("constants must be 'sharp' or 'classical', got '" + s + "'");
}

nlohmann::json spec_json(const TestFunctionSpec& s) {
    nlohmann::json j;
    switch (s.kind) {
        case TestFunctionKind::gaussian:
            j["kind"] = "gaussian";
            break;
        case TestFunctionKind::bump:
            j["kind"] = "bump";
            break;
        case TestFunctionKind::random_bandlimited:
            j["kind"] = "random-bandlimited";
            break;
    }
    if (s.kind == TestFunctionKind::random_bandlimited) {
        j["seed"] = s.seed;
        j["components"] = s.components;
        j["center_radius"] = s.center_radius;
        j["t_center_radius"] = s.t_center_radius;
        j["width_range"] = {s.width_range.lo, s.width_range.hi};
        j["t_width_range"] = {s.t_width_range.lo, s.t_width_range.hi};
        nlohmann::json f = nlohmann::json::array();
        for (const Range& r : s.frequency_abs_range) {
            f.push_back({r.lo, r.hi});
        }
        j["frequency_abs_range"] = f;
    } else {
        j["center"] = s.center;
        j["t_center"] = s.t_center;
        j["width"] = s.width;
        j["t_width"] = s.t_width;
        j["frequency"] = s.frequency;
    }
    return j;
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{
        "dual-measure-scaling", "gaussian-extremality", "hausdorff-young", "minkowski",       "nilpotent-bound",
        "plancherel",           "proof-chain",          "russo",           "semi-invariance",
    };
    return names;
}

std::size_t RunConfig::resolved_grid_n() const {
    if (grid_n) {
        return *grid_n;
    }
    return group == "heisenberg" ? 64 : 128;
}

void RunConfig::validate() const {
    if (group != "axb" && group != "heisenberg") {
        throw ConfigError("group must be 'axb' or 'heisenberg', got '" + group + "'");
    }
    if (p.empty()) {
        throw ConfigError("at least one exponent p is required");
    }
    for (double v : p) {
        if (!(v > 1.0) || v > 2.0) {
            std::ostringstream os;
            os << "exponent p = " << v << " is outside (1, 2]";
            throw ConfigError(os.str());
        }
    }
    if (!is_power_of_two(resolved_grid_n()) || !is_power_of_two(grid_h) || resolved_grid_n() < 8 || grid_h < 8) {
        throw ConfigError("grid sizes must be powers of two and at least 8");
    }
    if (!(extents.n_hi > extents.n_lo) || !(extents.h_hi > extents.h_lo)) {
        throw ConfigError("grid extents must be nonempty intervals");
    }
    if (lambda_points < 2 || lambda_points % 2 != 0) {
        throw ConfigError("lambda_points must be a positive even number");
    }
    if (!(equality_tolerance > 0.0) || !(inequality_slack >= 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    for (const std::string& c : checks) {
        if (c != "all" && std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
            throw ConfigError("unknown check '" + c + "' (valid: all, " + join(check_names()) + ")");
        }
    }
    if (out.empty()) {
        throw ConfigError("output path is empty");
    }
}

std::vector<std::string> RunConfig::selected_checks() const {
    std::set<std::string> chosen;
    for (const std::string& c : checks) {
        if (c == "all") {
            chosen.insert(check_names().begin(), check_names().end());
        } else {
            chosen.insert(c);
        }
    }
    if (group != "heisenberg") {
        chosen.erase("nilpotent-bound");
    }
    return {chosen.begin(), chosen.end()};
}

VerifyOptions RunConfig::verify_options(unsigned threads) const {
    VerifyOptions o;
    o.constants = constants;
    o.equality_tolerance = equality_tolerance;
    o.inequality_slack = inequality_slack;
    o.lambda_points = lambda_points;
    o.refinement = refinement;
    o.threads = threads;
    o.dump_dir = dump_dir;
    return o;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["group"] = group;
    j["p"] = p;
    j["grid_n"] = resolved_grid_n();
    j["grid_h"] = grid_h;
    j["extents"] = {{"n", {extents.n_lo, extents.n_hi}}, {"h", {extents.h_lo, extents.h_hi}}};
    j["seed"] = seed;
    j["checks"] = checks;
    j["constants"] = regime_name(constants);
    j["tolerances"] = {{"equality", equality_tolerance}, {"inequality", inequality_slack}};
    j["fixtures"] = fixtures;
    j["lambda_points"] = lambda_points;
    j["refinement"] = refinement;
    j["synthetic_kernels"] = synthetic_kernels;
    j["semi_invariance_elements"] = semi_invariance_elements;
    j["measure_pairs"] = measure_pairs;
    j["out"] = out.string();
    return j;
}

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "group") {
                c.group = v.get<std::string>();
            } else if (key == "p") {
                c.p = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
            } else if (key == "grid_n") {
                c.grid_n = v.get<std::size_t>();
            } else if (key == "grid_h") {
                c.grid_h = v.get<std::size_t>();
            } else if (key == "extents") {
                if (v.contains("n")) {
                    c.extents.n_lo = v.at("n").at(0).get<double>();
                    c.extents.n_hi = v.at("n").at(1).get<double>();
                }
                if (v.contains("h")) {
                    c.extents.h_lo = v.at("h").at(0).get<double>();
                    c.extents.h_hi = v.at("h").at(1).get<double>();
                }
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "checks") {
                c.checks = v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
            } else if (key == "constants") {
                c.constants = parse_regime(v.get<std::string>());
            } else if (key == "tolerances") {
                if (v.contains("equality")) {
                    c.equality_tolerance = v.at("equality").get<double>();
                }
                if (v.contains("inequality")) {
                    c.inequality_slack = v.at("inequality").get<double>();
                }
            } else if (key == "fixtures") {
                c.fixtures = v.get<std::size_t>();
            } else if (key == "lambda_points") {
                c.lambda_points = v.get<std::size_t>();
            } else if (key == "refinement") {
                c.refinement = v.get<bool>();
            } else if (key == "synthetic_kernels") {
                c.synthetic_kernels = v.get<std::size_t>();
            } else if (key == "semi_invariance_elements") {
                c.semi_invariance_elements = v.get<std::size_t>();
            } else if (key == "measure_pairs") {
                c.measure_pairs = v.get<std::size_t>();
            } else if (key == "out") {
                c.out = v.get<std::string>();
            } else if (key == "dump_dir") {
                c.dump_dir = v.get<std::string>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config value has the wrong type: ") + e.what());
    }
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    RunConfig c;
    apply_config_json(c, j);
    return c;
}

nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j;
    j["type"] = "record";
    j["name"] = r.name;
    j["group"] = r.group;
    j["p"] = r.p;
    j["grid"] = r.grid;
    j["label"] = r.label;
    j["kind"] = r.kind == CheckKind::inequality ? "inequality" : "equality";
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    nlohmann::json extra = nlohmann::json::object();
    for (const auto& [k, v] : r.extra) {
        extra[k] = v;
    }
    j["extra"] = extra;
    return j;
}

Report run_suite(const RunConfig& config, unsigned threads) {
    config.validate();
    const std::string started = utc_timestamp();
    const GroupExtensionModel model = model_by_name(config.group);
    const DualOrbitModel dual = dual_by_name(config.group);
    const std::vector<std::string> selected = config.selected_checks();
    const auto has = [&](const char* name) {
        return std::find(selected.begin(), selected.end(), name) != selected.end();
    };
    // Jobs run on the pool; each transform inside a job stays single-threaded.
    const VerifyOptions opts = config.verify_options(1);
    const Grids grids = make_grids(model, config.resolved_grid_n(), config.grid_h, config.extents);
    const std::vector<Fixture> fixtures = standard_fixtures(model, config.fixtures, config.seed);

    std::vector<std::function<std::vector<CheckResult>()>> jobs;
    if (has("plancherel")) {
        for (const Fixture& f : fixtures) {
            jobs.emplace_back([&, f] { return std::vector<CheckResult>{check_plancherel(f, model, grids, opts)}; });
        }
    }
    const bool per_fixture = has("hausdorff-young") || has("proof-chain") || has("nilpotent-bound");
    if (per_fixture) {
        for (const Fixture& f : fixtures) {
            jobs.emplace_back([&, f] {
                const SampledFunction g = sample(f.spec, grids, model);
                std::vector<CheckResult> out;
                if (has("hausdorff-young")) {
                    auto r = check_hausdorff_young(g, f.label, config.p, opts);
                    out.insert(out.end(), r.begin(), r.end());
                }
                if (has("proof-chain")) {
                    for (double p : config.p) {
                        auto r = check_proof_chain(g, f.label, p, opts);
                        out.insert(out.end(), r.begin(), r.end());
                    }
                }
                if (has("nilpotent-bound")) {
                    for (double p : config.p) {
                        out.push_back(check_nilpotent_bound(g, f.label, p, opts));
                    }
                }
                return out;
            });
        }
    }
    if (has("gaussian-extremality")) {
        jobs.emplace_back([&] {
            const SampledFunction g = sample(gaussian_fixture(model), grids, model);
            std::vector<CheckResult> out;
            for (double p : config.p) {
                out.push_back(check_gaussian_extremality(g, "gaussian", p, opts));
            }
            return out;
        });
    }
    if (has("semi-invariance")) {
        jobs.emplace_back([&] {
            return std::vector<CheckResult>{
                check_semi_invariance(model, dual, config.semi_invariance_elements, config.seed, opts)};
        });
    }
    if (has("dual-measure-scaling")) {
        jobs.emplace_back([&] {
            return std::vector<CheckResult>{check_dual_measure_scaling(model, config.measure_pairs, config.seed, opts)};
        });
    }
    if (has("minkowski") || has("russo")) {
        for (double p : config.p) {
            if (has("minkowski")) {
                jobs.emplace_back([&, p] {
                    return std::vector<CheckResult>{check_minkowski(config.synthetic_kernels, p, config.seed, opts)};
                });
            }
            if (has("russo")) {
                jobs.emplace_back([&, p] {
                    return std::vector<CheckResult>{check_russo(config.synthetic_kernels, p, config.seed, opts)};
                });
            }
        }
    }

    std::vector<std::vector<CheckResult>> results(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) { results[i] = jobs[i](); });

    Report report;
    for (auto& r : results) {
        report.records.insert(report.records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    sort_canonical(report.records);
    nlohmann::json runtimes = nlohmann::json::array();
    for (const CheckResult& r : report.records) {
        ++report.summary.records;
        if (r.pass) {
            ++report.summary.passed;
        } else {
            ++report.summary.failed;
        }
        runtimes.push_back({{"name", r.name}, {"p", r.p}, {"label", r.label}, {"seconds", r.runtime}});
    }

    std::ostringstream eigen_version;
    eigen_version << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
    nlohmann::json& h = report.header;
    h["type"] = "header";
    h["config"] = config.to_json();
    h["versions"] = {{"hyw", kVersion}, {"eigen", eigen_version.str()}, {"fftw", std::string(fftw_version)}, {"compiler", std::string(__VERSION__)}};
    h["model"] = {{"name", model.name},           {"dim_N", model.dim_N},
                  {"dim_G", model.dim_G},         {"unimodular", model.unimodular},
                  {"nilpotent", model.nilpotent}, {"max_orbit_dim_G", model.max_orbit_dim_G},
                  {"dual", dual.description}};
    h["threads"] = threads;
    h["started"] = started;
    h["finished"] = utc_timestamp();
    h["runtimes"] = runtimes;
    return report;
}

std::string format_report(const Report& report) {
    std::ostringstream os;
    os << "HYWREPORT 1\n";
    os << report.header.dump() << '\n';
    std::map<std::string, std::pair<double, std::string>> worst;
    for (const CheckResult& r : report.records) {
        os << to_json(r).dump() << '\n';
        // Worst = smallest slack relative to the allowed tolerance.
        const double slack = r.kind == CheckKind::inequality ? r.margin : r.tolerance - r.margin;
        auto it = worst.find(r.name);
        if (it == worst.end() || slack < it->second.first) {
            worst[r.name] = {slack, r.label + " p=" + to_json(r)["p"].dump()};
        }
    }
    nlohmann::json summary;
    summary["type"] = "summary";
    summary["records"] = report.summary.records;
    summary["passed"] = report.summary.passed;
    summary["failed"] = report.summary.failed;
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [name, v] : worst) {
        w[name] = {{"slack", v.first}, {"at", v.second}};
    }
    summary["worst"] = w;
    os << summary.dump() << '\n';
    os << "# " << report.summary.passed << "/" << report.summary.records << " checks passed";
    if (report.summary.failed > 0) {
        os << ", " << report.summary.failed << " FAILED";
    }
    os << '\n';
    for (const CheckResult& r : report.records) {
        if (!r.pass) {
            os << "# FAIL " << r.name << " " << r.group << " p=" << r.p << " " << r.label << " lhs=" << r.lhs
               << " rhs=" << r.rhs << '\n';
        }
    }
    return os.str();
}

void write_report_atomic(const Report& report, const std::filesystem::path& path) {
    const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    const std::filesystem::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write report to " + path.string());
        }
        out << format_report(report);
        out.flush();
        if (!out) {
            throw ConfigError("failed while writing report " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string explain(std::string_view check_name) {
    static const std::map<std::string, std::string, std::less<>> text{
        {"plancherel",
         "Plancherel identity for the operator-valued transform (Duflo-Moore form with the formal dimension\n"
         "operator K = multiplication by the modular function on H).\n"
         "  lhs = sum_sigma0 nu(sigma0) ||[sigma(g) K^(1/2)]||_2^2   (Hilbert-Schmidt norms of the weighted kernels)\n"
         "  rhs = ||g||_2^2 with respect to dmu_G = dn Delta(h) dmu_H\n"
         "Equality within the relative tolerance; on the refined grid the error may grow by at most 2x.\n"
         "A neighbourhood of the non-free locus carrying a fixed fraction of the mass is excluded.\n"},
        {"hausdorff-young",
         "Hausdorff-Young inequality for groups with an abelian normal subgroup N and free dual action.\n"
         "  lhs = ( sum_sigma0 nu(sigma0) ||[sigma(g) K^(1/q)]||_q^q )^(1/q)\n"
         "  rhs = A_p(N) ||g||_p,  A_p(R^d) = (p^(1/p) / q^(1/q))^(d/2) (sharp) or 1 (classical)\n"
         "Inequality with relative slack.\n"},
        {"proof-chain",
         "Every intermediate bound of the Hausdorff-Young argument, in q-th powers:\n"
         "  L0 = sum nu ||M||_q^q\n"
         "  L1 = sum nu (C C*)^(q/2)                 Russo cross-norm bound per sigma0, C = ||k||_{q,p,q}\n"
         "  L2 = (sum nu C^q)^(1/2) (sum nu C*^q)^(1/2)   Cauchy-Schwarz\n"
         "  L3 = (Y Y*)^(1/2), Y = ( sum_s h [sum nu sum_{xi-gamma=s} h|k|^q]^(p/q) )^(q/p)   generalized Minkowski\n"
         "  Z  = same quantity evaluated from the slice transforms ghat_s along the orbits (equals L3)\n"
         "  W  = A_p(N)^q ||g||_p^q                  abelian Hausdorff-Young on each slice\n"
         "Asserted: L0 <= L1 <= L2 <= L3 = Z <= W, every link an equality at p = 2; also the per-sigma0\n"
         "cross-norm bound and a brute-force FFT check of ||ghat_s||_q <= A_p ||g_s||_p on every slice.\n"},
        {"semi-invariance",
         "Semi-invariance of the formal dimension operator:\n"
         "  sigma(x) K sigma(x)* = Delta(x)^-1 K\n"
         "for grid-compatible x, compared entrywise on the index block where the shifted grid overlaps.\n"},
        {"dual-measure-scaling",
         "Scaling of Lebesgue measure on the dual of N under the dual action:\n"
         "  |gamma . A| = Delta(gamma) |A|\n"
         "for random boxes A (interval length or parallelogram area of the mapped corners).\n"},
        {"minkowski",
         "Generalized Minkowski inequality with exponent q/p >= 1 for nonnegative kernels F:\n"
         "  ( sum_g w_g [sum_x w_x F^p]^(q/p) )^(1/q) <= ( sum_x w_x [sum_g w_g F^q]^(p/q) )^(1/p)\n"
         "on random weighted kernels; lhs of the record is the worst ratio.\n"},
        {"russo",
         "Russo cross-norm estimate for integral operators:\n"
         "  ||T_k||_q <= ||k||_{q,p,q}^(1/2) ||k*||_{q,p,q}^(1/2)\n"
         "on random complex weighted kernels; lhs of the record is the worst ratio.\n"},
        {"nilpotent-bound",
         "Nilpotent bound on the Heisenberg group:\n"
         "  ||F^p(g)|| <= A_p(R)^(dim G - d*(G)/2) ||g||_p,  dim G = 3, d*(G) = 2, exponent 2\n"
         "where d*(G) is the maximal coadjoint orbit dimension; A_p(R)^2 = A_p(R^2).\n"},
        {"gaussian-extremality",
         "Tightness of the sharp constant at the level of N: for the Gaussian fixture every slice satisfies\n"
         "  ||ghat_s||_q / ||g_s||_p >= 0.99 A_p(R^dim N)\n"
         "(Gaussians are Babenko-Beckner extremizers).\n"},
    };
    const auto it = text.find(check_name);
    if (it == text.end()) {
        throw ConfigError("unknown check '" + std::string(check_name) + "' (valid: " + join(check_names()) + ")");
    }
    return it->second;
}

std::filesystem::path write_fixtures(const RunConfig& config, const std::filesystem::path& dir) {
    config.validate();
    const GroupExtensionModel model = model_by_name(config.group);
    const Grids grids = make_grids(model, config.resolved_grid_n(), config.grid_h, config.extents);
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["format"] = "HYW1";
    manifest["generator"] = {{"tool", "hyw fixtures"}, {"version", kVersion}};
    manifest["created"] = utc_timestamp();
    manifest["config"] = config.to_json();
    manifest["fixtures"] = nlohmann::json::array();
    for (const Fixture& f : standard_fixtures(model, config.fixtures, config.seed)) {
        const SampledFunction g = sample(f.spec, grids, model);
        const std::string file = config.group + "_" + f.label + ".hyw";
        const std::uint64_t stamp = f.spec.kind == TestFunctionKind::random_bandlimited ? f.spec.seed : 0;
        write_array_file(dir / file, to_array_file(g, stamp));
        std::ostringstream sum;
        sum << std::hex << std::setw(16) << std::setfill('0') << checksum(g);
        manifest["fixtures"].push_back({{"label", f.label},
                                        {"file", file},
                                        {"checksum_fnv1a64", sum.str()},
                                        {"spec", spec_json(f.spec)},
                                        {"l2_norm", lp_norm_G(g, 2.0)},
                                        {"truncation_mass", g.truncation_mass}});
    }
    const std::filesystem::path path = dir / (config.group + "_fixtures.json");
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write fixture manifest " + path.string());
    }
    out << manifest.dump(2) << '\n';
    return path;
}

}  // namespace hyw
