#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyw/discretize.hpp"
#include "hyw/group_model.hpp"
#include "hyw/transform.hpp"

namespace hyw {

enum class CheckKind { inequality, equality };

struct CheckResult {
    std::string name;
    std::string group;
    double p = 0.0;
    std::string grid;
    /// Fixture or instance label, part of the canonical sort key.
    std::string label;
    CheckKind kind = CheckKind::inequality;
    double lhs = 0.0;
    double rhs = 0.0;
    /// rhs - lhs for inequalities, relative error for equalities.
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime = 0.0;
    /// Additional named quantities (refinement errors, instance counts, ...).
    std::vector<std::pair<std::string, double>> extra;

    double extra_value(const std::string& key, double fallback = 0.0) const;
};

/// Fills margin and pass from lhs, rhs, kind and tolerance.
void finalize(CheckResult& r);

/// Canonical report order: name, group, p, label, grid.
void sort_canonical(std::vector<CheckResult>& results);

enum class ConstantRegime { sharp, classical };

struct BabenkoConstant {
    double p = 2.0;
    int d = 1;
    double value = 1.0;
};

/// ((p^(1/p)) / (q^(1/q)))^(d/2) in the sharp regime, 1 in the classical one.
BabenkoConstant babenko_constant(double p, int d, ConstantRegime regime = ConstantRegime::sharp);

struct VerifyOptions {
    ConstantRegime constants = ConstantRegime::sharp;
    /// Relative slack of inequality checks on transformed fixtures.
    double inequality_slack = 1e-6;
    /// Relative tolerance of quadrature-dependent equalities.
    double equality_tolerance = 1e-2;
    /// Slack of pure linear-algebra identities and inequalities.
    double algebra_slack = 1e-10;
    /// Tolerance of exact measure identities.
    double measure_tolerance = 1e-12;
    /// Heisenberg lambda samples (both signs together).
    std::size_t lambda_points = 64;
    /// Excluded Plancherel mass relative to ||g||_2^2; <= 0 selects the default
    /// (ax+b: min(1e-3, h_H^2 / 4); Heisenberg: 1e-3).
    double exclusion_budget = 0.0;
    /// Run the refined grid for equality checks.
    bool refinement = true;
    unsigned threads = 1;
    /// Where offending fixtures are written when a chain link fails; empty disables.
    std::filesystem::path dump_dir;
};

/// A named test function on a group.
struct Fixture {
    std::string label;
    TestFunctionSpec spec;
};

/// The Gaussian fixture of the model followed by `count - 1` random band-limited ones.
std::vector<Fixture> standard_fixtures(const GroupExtensionModel& model, std::size_t count, std::uint64_t seed);

/// Gaussian fixture; Heisenberg carries a z-modulation that keeps mass off lambda = 0.
TestFunctionSpec gaussian_fixture(const GroupExtensionModel& model);

/// Default grids of a model at the given point counts.
Grids fixture_grids(const GroupExtensionModel& model, std::size_t n_points_N, std::size_t n_points_H);

/// Transversal, band and exclusion settings used by every transformed check.
FieldOptions field_options_for(const SampledFunction& g, const DualOrbitModel& dual, const VerifyOptions& options);

std::string grid_descriptor(const SampledFunction& g, const VerifyOptions& options);

/// ||F^2(g)||^2 against ||g||_2^2, with the refinement clause: the relative error on
/// the refined grid may not exceed twice the base error.
CheckResult check_plancherel(const Fixture& fixture, const GroupExtensionModel& model, const Grids& grids,
                             const VerifyOptions& options);

/// ||F^p(g)||_{B_q} <= A_p(N) ||g||_p for each p.
std::vector<CheckResult> check_hausdorff_young(const SampledFunction& g, const std::string& label,
                                               std::span<const double> ps, const VerifyOptions& options);

/// Values of the proof chain, in units of q-th powers.
struct ProofChain {
    double schatten = 0.0;       ///< sum nu ||M||_q^q
    double russo = 0.0;          ///< sum nu (C C*)^(q/2)
    double cauchy_schwarz = 0.0; ///< (sum nu C^q)^(1/2) (sum nu C*^q)^(1/2)
    double minkowski = 0.0;      ///< (Y Y*)^(1/2) with the swapped iterated sums
    double slices = 0.0;         ///< same quantity computed from the slice transforms
    double bound = 0.0;          ///< A_p^q ||g||_p^q
    double worst_russo_ratio = 0.0;     ///< max over sigma0 of ||M||_q / (C C*)^(1/2)
    double worst_slice_ratio = 0.0;     ///< max over slices of ||ghat_s||_q / (A_p ||g_s||_p)
};

ProofChain proof_chain(const SampledFunction& g, double p, const VerifyOptions& options);

/// One record per adjacent link, one for the per-sigma0 cross-norm estimate and one
/// for the brute-force slice transforms.
std::vector<CheckResult> check_proof_chain(const SampledFunction& g, const std::string& label, double p,
                                           const VerifyOptions& options);

/// max |sigma(x) K sigma(x)* - Delta(x)^-1 K| over the block where both sides are
/// defined, relative to max |Delta(x)^-1 K|.
double semi_invariance_deviation(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                 const GroupElement& x, const Grid1D& grid);

/// `count` random grid-compatible x per sampled sigma0.
CheckResult check_semi_invariance(const GroupExtensionModel& model, const DualOrbitModel& dual, std::size_t count,
                                  std::uint64_t seed, const VerifyOptions& options);

/// Box [lo, hi] in the character parameter space.
struct ParamBox {
    CharacterParam lo;
    CharacterParam hi;
};

/// Lebesgue measure of gamma . A (interval length or parallelogram area).
double image_measure(const GroupExtensionModel& model, double gamma, const ParamBox& box);

CheckResult check_dual_measure_scaling(const GroupExtensionModel& model, std::size_t count, std::uint64_t seed,
                                       const VerifyOptions& options);

/// Both sides of the swapped iterated norm for a nonnegative kernel F on weighted grids:
/// lhs = (sum_g w_g [sum_x w_x F^p]^(q/p))^(1/q), rhs = (sum_x w_x [sum_g w_g F^q]^(p/q))^(1/p).
std::pair<double, double> minkowski_sides(const Eigen::MatrixXd& F, std::span<const double> w_xi,
                                          std::span<const double> w_gamma, double p, double q);

CheckResult check_minkowski(std::size_t count, double p, std::uint64_t seed, const VerifyOptions& options);

/// Russo estimate on random synthetic kernels with random positive weights.
CheckResult check_russo(std::size_t count, double p, std::uint64_t seed, const VerifyOptions& options);

/// Heisenberg only: ||F^p(g)|| <= A_p(R)^(dim G - d*(G)/2) ||g||_p.
CheckResult check_nilpotent_bound(const SampledFunction& g, const std::string& label, double p,
                                  const VerifyOptions& options);

/// Exponent dim G - d*(G)/2 of the nilpotent bound.
double nilpotent_exponent(const GroupExtensionModel& model);

/// Smallest and largest ||ghat_s||_q / ||g_s||_p over slices carrying mass, via the
/// zero-padded FFT grid.
std::pair<double, double> slice_ratio_range(const SampledFunction& g, double p, std::size_t pad = 4);

/// min slice ratio >= 0.99 A_p(R^dim_N).
CheckResult check_gaussian_extremality(const SampledFunction& g, const std::string& label, double p,
                                       const VerifyOptions& options);

}  // namespace hyw
