#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyw/verify.hpp"

namespace hyw {

/// Check families known to the suite, in canonical order.
const std::vector<std::string>& check_names();

struct RunConfig {
    std::string group = "axb";
    std::vector<double> p{1.5};
    /// Points per N axis; unset selects 128 (ax+b) or 64 (Heisenberg).
    std::optional<std::size_t> grid_n;
    std::size_t grid_h = 128;
    GridExtents extents;
    std::uint64_t seed = 1;
    /// Check families to run; "all" expands to every family that applies to the group.
    std::vector<std::string> checks{"all"};
    ConstantRegime constants = ConstantRegime::sharp;
    double equality_tolerance = 1e-2;
    double inequality_slack = 1e-6;
    std::size_t fixtures = 10;
    std::size_t lambda_points = 64;
    bool refinement = true;
    std::size_t synthetic_kernels = 1000;
    std::size_t semi_invariance_elements = 20;
    std::size_t measure_pairs = 100;
    std::filesystem::path out = "hyw-report.jsonl";
    std::filesystem::path dump_dir;

    std::size_t resolved_grid_n() const;
    /// Throws ConfigError unless every invariant holds.
    void validate() const;
    /// Selected families after expanding "all" and dropping families that do not apply.
    std::vector<std::string> selected_checks() const;
    VerifyOptions verify_options(unsigned threads) const;
    nlohmann::json to_json() const;
};

/// Applies the keys of a JSON config object; unknown keys are a ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

struct ReportSummary {
    std::size_t records = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct Report {
    nlohmann::json header;
    std::vector<CheckResult> records;
    ReportSummary summary;

    bool all_pass() const { return summary.failed == 0; }
};

nlohmann::json to_json(const CheckResult& r);

/// Runs the selected checks over the fixtures on `threads` workers.
Report run_suite(const RunConfig& config, unsigned threads);

/// "HYWREPORT 1", header, one JSON record per line, summary record, readable footer.
std::string format_report(const Report& report);

/// Writes through a temporary file in the same directory and renames it into place.
void write_report_atomic(const Report& report, const std::filesystem::path& path);

/// Mathematical description and implemented formula of a check family.
std::string explain(std::string_view check_name);

/// Writes one HYW1 file per fixture and a provenance manifest; returns the manifest path.
std::filesystem::path write_fixtures(const RunConfig& config, const std::filesystem::path& dir);

}  // namespace hyw
