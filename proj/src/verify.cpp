#include "hyw/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "hyw/error.hpp"
#include "hyw/parallel.hpp"
#include "hyw/schatten.hpp"

namespace hyw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
}

std::string format_p(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

void dump_fixture(const SampledFunction& g, const std::string& stem, const VerifyOptions& options) {
    if (options.dump_dir.empty()) {
        return;
    }
    std::filesystem::create_directories(options.dump_dir);
    write_array_file(options.dump_dir / (stem + ".hyw"), to_array_file(g, 0));
}

// Diagonal sums A(s) = sum_{xi_i - gamma_j = s} h |k_ij|^q, keyed by 2 s / h.
void accumulate_diagonals(const WeightedKernel& k, double q, double weight, std::map<long, double>& acc) {
    if (k.values.size() == 0) {
        return;
    }
    const double h = k.xi_grid.weights.front();
    for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
            const double s = k.xi_grid.points[static_cast<std::size_t>(i)] - k.gamma_grid.points[static_cast<std::size_t>(j)];
            const long key = std::lround(2.0 * s / h);
            acc[key] += weight * h * std::pow(std::abs(k.values(i, j)), q);
        }
    }
}

double swapped_sum(const std::map<long, double>& acc, double h, double p, double q) {
    double total = 0.0;
    for (const auto& [key, b] : acc) {
        total += h * std::pow(b, p / q);
    }
    return std::pow(total, q / p);
}

}  // namespace

double CheckResult::extra_value(const std::string& key, double fallback) const {
    for (const auto& [k, v] : extra) {
        if (k == key) {
            return v;
        }
    }
    return fallback;
}

void finalize(CheckResult& r) {
    if (r.kind == CheckKind::inequality) {
        r.margin = r.rhs - r.lhs;
        r.pass = std::isfinite(r.lhs) && std::isfinite(r.rhs) && r.lhs <= r.rhs * (1.0 + r.tolerance);
    } else {
        const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
        r.margin = std::abs(r.lhs - r.rhs) / scale;
        r.pass = std::isfinite(r.margin) && std::abs(r.lhs - r.rhs) <= r.tolerance * scale;
    }
}

void sort_canonical(std::vector<CheckResult>& results) {
    std::stable_sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
        return std::tie(a.name, a.group, a.p, a.label, a.grid) < std::tie(b.name, b.group, b.p, b.label, b.grid);
    });
}

BabenkoConstant babenko_constant(double p, int d, ConstantRegime regime) {
    if (!(p > 1.0) || p > 2.0) {
        throw InputError("babenko_constant: need 1 < p <= 2, got " + format_p(p));
    }
    if (d < 1) {
        throw InputError("babenko_constant: dimension must be positive");
    }
    BabenkoConstant c;
    c.p = p;
    c.d = d;
    if (regime == ConstantRegime::classical || p == 2.0) {
        c.value = 1.0;
        return c;
    }
    const double q = conjugate_exponent(p);
    c.value = std::pow(std::pow(p, 1.0 / p) / std::pow(q, 1.0 / q), 0.5 * d);
    return c;
}

TestFunctionSpec gaussian_fixture(const GroupExtensionModel& model) {
    if (model.dim_N == 2) {
        return gaussian_spec({0.8, 0.8}, 0.5, {0.0, 1.0});
    }
    return gaussian_spec(NVector(static_cast<std::size_t>(model.dim_N), 0.7), 0.4);
}

std::vector<Fixture> standard_fixtures(const GroupExtensionModel& model, std::size_t count, std::uint64_t seed) {
    std::vector<Fixture> out;
    if (count == 0) {
        return out;
    }
    out.push_back({"gaussian", gaussian_fixture(model)});
    for (std::size_t i = 1; i < count; ++i) {
        const std::uint64_t s = seed + i;
        out.push_back({"random-" + std::to_string(s), random_spec(model, s)});
    }
    return out;
}

Grids fixture_grids(const GroupExtensionModel& model, std::size_t n_points_N, std::size_t n_points_H) {
    return make_grids(model, n_points_N, n_points_H, GridExtents{});
}

FieldOptions field_options_for(const SampledFunction& g, const DualOrbitModel& dual, const VerifyOptions& options) {
    const CharacterSlice slice(g);
    const std::vector<double> nyq = slice.nyquist();
    double budget = options.exclusion_budget;
    if (budget <= 0.0) {
        const double h = g.grids.h.spacing();
        budget = dual.exclusion_in_window ? std::min(1e-3, 0.25 * h * h) : 1e-3;
    }
    FieldOptions fo;
    fo.threads = options.threads;
    const double max_radius = 0.5 * nyq.back();
    const double r = exclusion_radius_for_budget(slice, budget, max_radius);
    if (dual.exclusion_in_window) {
        fo.kernel.exclusion_radius = r;
    } else {
        fo.transversal.n_points = options.lambda_points;
        fo.transversal.max_parameter = nyq.back();
        fo.transversal.exclusion_radius = r;
    }
    return fo;
}

std::string grid_descriptor(const SampledFunction& g, const VerifyOptions& options) {
    std::ostringstream os;
    os << "N=" << g.grids.n.front().size();
    if (g.grids.n.size() > 1) {
        os << "^" << g.grids.n.size();
    }
    os << " H=" << g.grids.h.size() << " N-ext=[" << g.grids.extents.n_lo << "," << g.grids.extents.n_hi
       << "] H-ext=[" << g.grids.extents.h_lo << "," << g.grids.extents.h_hi << "]";
    if (g.model.dim_N > 1) {
        os << " lambda=" << options.lambda_points;
    }
    return os.str();
}

namespace {

struct PlancherelSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double radius = 0.0;
};

PlancherelSides plancherel_sides(const SampledFunction& g, const VerifyOptions& options) {
    const DualOrbitModel dual = dual_by_name(g.model.name);
    const FieldOptions fo = field_options_for(g, dual, options);
    const double two = 2.0;
    PlancherelSides s;
    s.lhs = std::pow(bq_oplus_norms(g, dual, std::span<const double>(&two, 1), fo).front(), 2);
    s.rhs = std::pow(lp_norm_G(g, 2.0), 2);
    s.radius = dual.exclusion_in_window ? fo.kernel.exclusion_radius : fo.transversal.exclusion_radius;
    return s;
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

CheckResult check_plancherel(const Fixture& fixture, const GroupExtensionModel& model, const Grids& grids,
                             const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const SampledFunction g = sample(fixture.spec, grids, model);
    const PlancherelSides base = plancherel_sides(g, options);
    CheckResult r;
    r.name = "plancherel";
    r.group = model.name;
    r.p = 2.0;
    r.grid = grid_descriptor(g, options);
    r.label = fixture.label;
    r.kind = CheckKind::equality;
    r.lhs = base.lhs;
    r.rhs = base.rhs;
    r.tolerance = options.equality_tolerance;
    finalize(r);
    const double err = relative_error(base.lhs, base.rhs);
    r.extra.emplace_back("exclusion_radius", base.radius);
    r.extra.emplace_back("relative_error", err);
    r.extra.emplace_back("truncation_mass", g.truncation_mass);
    if (options.refinement && base.rhs > 0.0) {
        const SampledFunction fine = sample(fixture.spec, refine(model, grids), model);
        const PlancherelSides ref = plancherel_sides(fine, options);
        const double err_ref = relative_error(ref.lhs, ref.rhs);
        r.extra.emplace_back("relative_error_refined", err_ref);
        r.extra.emplace_back("refinement_ratio", err > 0.0 ? err_ref / err : 0.0);
        r.pass = r.pass && err_ref <= 2.0 * err + 1e-14;
    }
    r.runtime = seconds_since(t0);
    return r;
}

std::vector<CheckResult> check_hausdorff_young(const SampledFunction& g, const std::string& label,
                                               std::span<const double> ps, const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const DualOrbitModel dual = dual_by_name(g.model.name);
    const FieldOptions fo = field_options_for(g, dual, options);
    const std::vector<double> lhs = bq_oplus_norms(g, dual, ps, fo);
    const double share = seconds_since(t0) / static_cast<double>(std::max<std::size_t>(ps.size(), 1));
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto t1 = Clock::now();
        CheckResult r;
        r.name = "hausdorff-young";
        r.group = g.model.name;
        r.p = ps[i];
        r.grid = grid_descriptor(g, options);
        r.label = label;
        r.kind = CheckKind::inequality;
        const double A = babenko_constant(ps[i], g.model.dim_N, options.constants).value;
        r.lhs = lhs[i];
        r.rhs = A * lp_norm_G(g, ps[i]);
        r.tolerance = options.inequality_slack;
        r.extra.emplace_back("constant", A);
        r.extra.emplace_back("ratio", r.rhs > 0.0 ? r.lhs / r.rhs : 0.0);
        finalize(r);
        r.runtime = share + seconds_since(t1);
        out.push_back(std::move(r));
    }
    return out;
}

std::pair<double, double> slice_ratio_range(const SampledFunction& g, double p, std::size_t pad) {
    const double q = conjugate_exponent(p);
    const CharacterSlice slice(g);
    std::vector<double> norms(g.grids.h.size());
    double largest = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        norms[k] = lp_norm_slice(g, k, p);
        largest = std::max(largest, norms[k]);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        if (norms[k] <= 1e-6 * largest) {
            continue;
        }
        const ReciprocalSlice rs = slice.on_reciprocal_grid(k, pad);
        double cell = 1.0;
        for (const Grid1D& axis : rs.axes) {
            cell *= axis.weights.front();
        }
        double acc = 0.0;
        for (const auto& v : rs.values) {
            acc += std::pow(std::abs(v), q);
        }
        const double ratio = std::pow(acc * cell, 1.0 / q) / norms[k];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    if (hi == 0.0) {
        lo = 0.0;
    }
    return {lo, hi};
}

ProofChain proof_chain(const SampledFunction& g, double p, const VerifyOptions& options) {
    const double q = conjugate_exponent(p);
    const GroupExtensionModel& model = g.model;
    const DualOrbitModel dual = dual_by_name(model.name);
    const FieldOptions fo = field_options_for(g, dual, options);
    const CharacterSlice slice(g);
    const std::vector<TransversalPoint> points = dual.transversal(fo.transversal);
    const double h = g.grids.h.spacing();
    const Grid1D& sgrid = g.grids.h;

    struct PerPoint {
        double schatten_q = 0.0;
        double cross = 0.0;
        double cross_adj = 0.0;
        std::map<long, double> diag;
        std::map<long, double> diag_adj;
        std::vector<double> slice_sums;  // sum_i h Delta(xi_i) |ghat_s(-xi_i . sigma0)|^q per s
    };
    std::vector<PerPoint> per(points.size());
    parallel_for(points.size(), fo.threads, [&](std::size_t n) {
        const FieldComponent c = field_component(slice, dual, points[n], p, fo.kernel);
        PerPoint& out = per[n];
        out.slice_sums.assign(sgrid.size(), 0.0);
        if (c.matrix.size() == 0) {
            return;
        }
        const WeightedKernel adj = adjoint_kernel(c.kernel);
        out.schatten_q = std::pow(schatten_norm(c.matrix, SchattenExponent(q)), q);
        out.cross = cross_norm_qpq(c.kernel, q, p);
        out.cross_adj = cross_norm_qpq(adj, q, p);
        accumulate_diagonals(c.kernel, q, 1.0, out.diag);
        accumulate_diagonals(adj, q, 1.0, out.diag_adj);

        // Same orbit rows, straight from the slice transforms.
        const long first = static_cast<long>(std::ceil(c.diagnostics.window_lo / h - 1e-9));
        const long last = static_cast<long>(std::floor(c.diagnostics.window_hi / h + 1e-9));
        std::vector<CharacterParam> chis;
        std::vector<double> weights;
        for (long i = first; i <= last; ++i) {
            const double xi = model.h_from_coordinate(static_cast<double>(i) * h);
            CharacterParam chi = model.dual_action_fn(xi, points[n].chi);
            for (double& v : chi) {
                v = -v;
            }
            chis.push_back(std::move(chi));
            weights.push_back(h * model.modular_on_H(xi));
        }
        // Rows sharing the trailing parameters go through one line evaluation.
        std::size_t start = 0;
        while (start < chis.size()) {
            std::size_t end = start + 1;
            while (end < chis.size() && std::equal(chis[end].begin() + 1, chis[end].end(), chis[start].begin() + 1)) {
                ++end;
            }
            std::vector<double> heads;
            for (std::size_t i = start; i < end; ++i) {
                heads.push_back(chis[i].front());
            }
            const CharacterParam tail(chis[start].begin() + 1, chis[start].end());
            const Eigen::MatrixXcd rows = slice.evaluate_line(heads, tail);
            for (std::size_t i = start; i < end; ++i) {
                for (std::size_t k = 0; k < sgrid.size(); ++k) {
                    out.slice_sums[k] += weights[i] * std::pow(std::abs(rows(static_cast<Eigen::Index>(i - start),
                                                                             static_cast<Eigen::Index>(k))), q);
                }
            }
            start = end;
        }
    });

    ProofChain chain;
    double X = 0.0;
    double Xa = 0.0;
    std::map<long, double> B;
    std::map<long, double> Ba;
    std::vector<double> Q(sgrid.size(), 0.0);
    for (std::size_t n = 0; n < points.size(); ++n) {
        const double v = points[n].weight;
        const PerPoint& pp = per[n];
        chain.schatten += v * pp.schatten_q;
        chain.russo += v * std::pow(pp.cross * pp.cross_adj, 0.5 * q);
        X += v * std::pow(pp.cross, q);
        Xa += v * std::pow(pp.cross_adj, q);
        for (const auto& [key, a] : pp.diag) {
            B[key] += v * a;
        }
        for (const auto& [key, a] : pp.diag_adj) {
            Ba[key] += v * a;
        }
        for (std::size_t k = 0; k < Q.size(); ++k) {
            Q[k] += v * pp.slice_sums[k];
        }
        if (pp.cross > 0.0 && pp.cross_adj > 0.0) {
            chain.worst_russo_ratio =
                std::max(chain.worst_russo_ratio, std::pow(pp.schatten_q, 1.0 / q) / std::sqrt(pp.cross * pp.cross_adj));
        }
    }
    chain.cauchy_schwarz = std::sqrt(X * Xa);
    chain.minkowski = std::sqrt(swapped_sum(B, h, p, q) * swapped_sum(Ba, h, p, q));
    double z = 0.0;
    for (std::size_t k = 0; k < Q.size(); ++k) {
        z += sgrid.weights[k] * model.modular_on_H(model.h_from_coordinate(sgrid.points[k])) * std::pow(Q[k], p / q);
    }
    chain.slices = std::pow(z, q / p);
    const double A = babenko_constant(p, model.dim_N, options.constants).value;
    chain.bound = std::pow(A * lp_norm_G(g, p), q);
    chain.worst_slice_ratio = slice_ratio_range(g, p).second / A;
    return chain;
}

std::vector<CheckResult> check_proof_chain(const SampledFunction& g, const std::string& label, double p,
                                           const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const ProofChain c = proof_chain(g, p, options);
    const bool l2 = p == 2.0;
    const std::string grid = grid_descriptor(g, options);
    std::vector<CheckResult> out;
    auto add = [&](const std::string& link, double lhs, double rhs, CheckKind kind, double tol) {
        CheckResult r;
        r.name = "proof-chain";
        r.group = g.model.name;
        r.p = p;
        r.grid = grid;
        r.label = label + ":" + link;
        r.kind = kind;
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tol;
        finalize(r);
        out.push_back(std::move(r));
    };
    const CheckKind link_kind = l2 ? CheckKind::equality : CheckKind::inequality;
    const double link_tol = l2 ? options.equality_tolerance : options.inequality_slack;
    add("1-schatten-russo", c.schatten, c.russo, link_kind, l2 ? link_tol : options.algebra_slack);
    add("2-russo-cauchy-schwarz", c.russo, c.cauchy_schwarz, link_kind, l2 ? link_tol : options.algebra_slack);
    add("3-cauchy-schwarz-minkowski", c.cauchy_schwarz, c.minkowski, link_kind, l2 ? link_tol : options.algebra_slack);
    add("4-minkowski-slices", c.minkowski, c.slices, CheckKind::equality, 1e-8);
    add("5-slices-bound", c.slices, c.bound, link_kind, link_tol);
    add("per-sigma0-russo", c.worst_russo_ratio, 1.0, CheckKind::inequality, options.algebra_slack);
    add("slice-hausdorff-young", c.worst_slice_ratio, 1.0, CheckKind::inequality, options.inequality_slack);
    const double runtime = seconds_since(t0);
    bool ok = true;
    for (CheckResult& r : out) {
        r.runtime = runtime / static_cast<double>(out.size());
        ok = ok && r.pass;
    }
    if (!ok) {
        dump_fixture(g, "proof-chain_" + g.model.name + "_" + label + "_p" + format_p(p), options);
    }
    return out;
}

double semi_invariance_deviation(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                 const GroupElement& x, const Grid1D& grid) {
    const Eigen::MatrixXcd S = induced_rep_matrix(model, sigma0, x, grid);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd K(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K[i] = model.modular_on_H(model.h_from_coordinate(grid.points[static_cast<std::size_t>(i)]));
    }
    const Eigen::MatrixXcd lhs = S * K.asDiagonal() * S.adjoint();
    const double dx = model.modular_on_H(x.h);
    const long shift = std::lround(model.coordinate_from_h(x.h) / grid.spacing());
    // Rows whose source point gamma^-1 xi stays on the grid.
    const Eigen::Index lo = std::max<long>(0, shift);
    const Eigen::Index hi = std::min<long>(n, n + shift);
    double dev = 0.0;
    double scale = 0.0;
    for (Eigen::Index i = lo; i < hi; ++i) {
        scale = std::max(scale, K[i] / dx);
        for (Eigen::Index j = lo; j < hi; ++j) {
            const double rhs = i == j ? K[i] / dx : 0.0;
            dev = std::max(dev, std::abs(lhs(i, j) - rhs));
        }
    }
    return scale > 0.0 ? dev / scale : dev;
}

CheckResult check_semi_invariance(const GroupExtensionModel& model, const DualOrbitModel& dual, std::size_t count,
                                  std::uint64_t seed, const VerifyOptions& options) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    const double h = 1.0 / 16.0;
    const Grid1D grid = Grid1D::lattice(-48, 96, h);
    TransversalOptions topt;
    topt.n_points = 4;
    topt.max_parameter = 2.0;
    topt.exclusion_radius = 0.25;
    const std::vector<TransversalPoint> sigmas = dual.transversal(topt);
    double worst = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        GroupElement x = identity(model);
        if (c > 0) {
            for (double& v : x.n) {
                v = uniform(rng, -2.0, 2.0);
            }
            const auto m = static_cast<long>(uniform_index(rng, 0, 40)) - 20;
            x.h = model.h_from_coordinate(static_cast<double>(m) * h);
        }
        for (const TransversalPoint& s : sigmas) {
            worst = std::max(worst, semi_invariance_deviation(model, s.chi, x, grid));
        }
    }
    CheckResult r;
    r.name = "semi-invariance";
    r.group = model.name;
    r.p = 0.0;
    r.grid = "H-lattice 96 x 1/16";
    r.label = "x" + std::to_string(count);
    r.kind = CheckKind::inequality;
    r.lhs = worst;
    r.rhs = options.algebra_slack;
    r.tolerance = 0.0;
    r.extra.emplace_back("instances", static_cast<double>(count));
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

double image_measure(const GroupExtensionModel& model, double gamma, const ParamBox& box) {
    const std::size_t dim = box.lo.size();
    if (box.hi.size() != dim || static_cast<int>(dim) != model.dim_N) {
        throw InputError("image_measure: box dimension does not match the model");
    }
    if (dim == 1) {
        const double a = model.dual_action_fn(gamma, box.lo)[0];
        const double b = model.dual_action_fn(gamma, box.hi)[0];
        return std::abs(b - a);
    }
    if (dim == 2) {
        const std::array<CharacterParam, 4> corners{CharacterParam{box.lo[0], box.lo[1]},
                                                    CharacterParam{box.hi[0], box.lo[1]},
                                                    CharacterParam{box.hi[0], box.hi[1]},
                                                    CharacterParam{box.lo[0], box.hi[1]}};
        double area = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const CharacterParam a = model.dual_action_fn(gamma, corners[i]);
            const CharacterParam b = model.dual_action_fn(gamma, corners[(i + 1) % 4]);
            area += a[0] * b[1] - b[0] * a[1];
        }
        return 0.5 * std::abs(area);
    }
    throw InputError("image_measure: supports dim_N <= 2");
}

CheckResult check_dual_measure_scaling(const GroupExtensionModel& model, std::size_t count, std::uint64_t seed,
                                       const VerifyOptions& options) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    const auto dim = static_cast<std::size_t>(model.dim_N);
    double worst = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        const double gamma = c == 0 ? model.h_identity : model.h_from_coordinate(uniform(rng, -3.0, 3.0));
        ParamBox box;
        double measure = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double lo = uniform(rng, -2.0, 2.0);
            const double side = uniform(rng, 0.1, 2.0);
            box.lo.push_back(lo);
            box.hi.push_back(lo + side);
            measure *= box.hi.back() - box.lo.back();
        }
        const double expected = model.modular_on_H(gamma) * measure;
        worst = std::max(worst, std::abs(image_measure(model, gamma, box) - expected) / expected);
    }
    CheckResult r;
    r.name = "dual-measure-scaling";
    r.group = model.name;
    r.grid = "parameter boxes";
    r.label = "pairs" + std::to_string(count);
    r.kind = CheckKind::inequality;
    r.lhs = worst;
    r.rhs = options.measure_tolerance;
    r.tolerance = 0.0;
    r.extra.emplace_back("instances", static_cast<double>(count));
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

std::pair<double, double> minkowski_sides(const Eigen::MatrixXd& F, std::span<const double> w_xi,
                                          std::span<const double> w_gamma, double p, double q) {
    if (static_cast<std::size_t>(F.rows()) != w_xi.size() || static_cast<std::size_t>(F.cols()) != w_gamma.size()) {
        throw InputError("minkowski_sides: weights do not match the kernel shape");
    }
    if (!(q / p >= 1.0)) {
        throw InputError("minkowski_sides: need q / p >= 1");
    }
    if ((F.array() < 0.0).any()) {
        throw InputError("minkowski_sides: kernel must be nonnegative");
    }
    double lhs = 0.0;
    for (Eigen::Index j = 0; j < F.cols(); ++j) {
        double inner = 0.0;
        for (Eigen::Index i = 0; i < F.rows(); ++i) {
            inner += w_xi[static_cast<std::size_t>(i)] * std::pow(F(i, j), p);
        }
        lhs += w_gamma[static_cast<std::size_t>(j)] * std::pow(inner, q / p);
    }
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
        double inner = 0.0;
        for (Eigen::Index j = 0; j < F.cols(); ++j) {
            inner += w_gamma[static_cast<std::size_t>(j)] * std::pow(F(i, j), q);
        }
        rhs += w_xi[static_cast<std::size_t>(i)] * std::pow(inner, p / q);
    }
    return {std::pow(lhs, 1.0 / q), std::pow(rhs, 1.0 / p)};
}

CheckResult check_minkowski(std::size_t count, double p, std::uint64_t seed, const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const double q = conjugate_exponent(p);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    std::size_t violations = 0;
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t rows = uniform_index(rng, 1, 12);
        const std::size_t cols = uniform_index(rng, 1, 12);
        Eigen::MatrixXd F(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < F.rows(); ++i) {
            for (Eigen::Index j = 0; j < F.cols(); ++j) {
                const double u = uniform01(rng);
                F(i, j) = u < 0.2 ? 0.0 : std::pow(uniform01(rng), 3.0) * 10.0;
            }
        }
        std::vector<double> wx(rows);
        std::vector<double> wg(cols);
        for (double& w : wx) {
            w = uniform(rng, 0.05, 1.0);
        }
        for (double& w : wg) {
            w = uniform(rng, 0.05, 1.0);
        }
        const auto [lhs, rhs] = minkowski_sides(F, wx, wg, p, q);
        if (rhs > 0.0) {
            worst = std::max(worst, lhs / rhs);
        }
        if (lhs > rhs * (1.0 + options.algebra_slack)) {
            ++violations;
        }
    }
    CheckResult r;
    r.name = "minkowski";
    r.group = "synthetic";
    r.p = p;
    r.grid = "random kernels up to 12x12";
    r.label = "kernels" + std::to_string(count);
    r.kind = CheckKind::inequality;
    r.lhs = worst;
    r.rhs = 1.0;
    r.tolerance = options.algebra_slack;
    r.extra.emplace_back("instances", static_cast<double>(count));
    r.extra.emplace_back("violations", static_cast<double>(violations));
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

CheckResult check_russo(std::size_t count, double p, std::uint64_t seed, const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const double q = conjugate_exponent(p);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    std::size_t violations = 0;
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t rows = uniform_index(rng, 1, 10);
        const std::size_t cols = uniform_index(rng, 1, 10);
        WeightedKernel k;
        k.xi_grid.points.resize(rows);
        k.xi_grid.weights.resize(rows);
        k.gamma_grid.points.resize(cols);
        k.gamma_grid.weights.resize(cols);
        for (std::size_t i = 0; i < rows; ++i) {
            k.xi_grid.points[i] = static_cast<double>(i);
            k.xi_grid.weights[i] = uniform(rng, 0.05, 1.0);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            k.gamma_grid.points[j] = static_cast<double>(j);
            k.gamma_grid.weights[j] = uniform(rng, 0.05, 1.0);
        }
        k.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
            for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
                k.values(i, j) = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
            }
        }
        const RussoGap gap = russo_gap(k, q, p);
        if (gap.rhs > 0.0) {
            worst = std::max(worst, gap.lhs / gap.rhs);
        }
        if (gap.lhs > gap.rhs * (1.0 + options.algebra_slack)) {
            ++violations;
        }
    }
    CheckResult r;
    r.name = "russo";
    r.group = "synthetic";
    r.p = p;
    r.grid = "random kernels up to 10x10";
    r.label = "kernels" + std::to_string(count);
    r.kind = CheckKind::inequality;
    r.lhs = worst;
    r.rhs = 1.0;
    r.tolerance = options.algebra_slack;
    r.extra.emplace_back("instances", static_cast<double>(count));
    r.extra.emplace_back("violations", static_cast<double>(violations));
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

double nilpotent_exponent(const GroupExtensionModel& model) {
    if (!model.nilpotent) {
        throw InputError("nilpotent bound: model '" + model.name + "' is not nilpotent");
    }
    return static_cast<double>(model.dim_G) - 0.5 * static_cast<double>(model.max_orbit_dim_G);
}

CheckResult check_nilpotent_bound(const SampledFunction& g, const std::string& label, double p,
                                  const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const double e = nilpotent_exponent(g.model);
    const DualOrbitModel dual = dual_by_name(g.model.name);
    const FieldOptions fo = field_options_for(g, dual, options);
    const double A = std::pow(babenko_constant(p, 1, options.constants).value, e);
    CheckResult r;
    r.name = "nilpotent-bound";
    r.group = g.model.name;
    r.p = p;
    r.grid = grid_descriptor(g, options);
    r.label = label;
    r.kind = CheckKind::inequality;
    r.lhs = bq_oplus_norms(g, dual, std::span<const double>(&p, 1), fo).front();
    r.rhs = A * lp_norm_G(g, p);
    r.tolerance = options.inequality_slack;
    r.extra.emplace_back("exponent", e);
    r.extra.emplace_back("constant", A);
    r.extra.emplace_back("constant_N", babenko_constant(p, g.model.dim_N, options.constants).value);
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

CheckResult check_gaussian_extremality(const SampledFunction& g, const std::string& label, double p,
                                       const VerifyOptions& options) {
    const auto t0 = Clock::now();
    const double A = babenko_constant(p, g.model.dim_N, ConstantRegime::sharp).value;
    const auto [lo, hi] = slice_ratio_range(g, p);
    CheckResult r;
    r.name = "gaussian-extremality";
    r.group = g.model.name;
    r.p = p;
    r.grid = grid_descriptor(g, options);
    r.label = label;
    r.kind = CheckKind::inequality;
    r.lhs = 0.99 * A;
    r.rhs = lo;
    r.tolerance = 0.0;
    r.extra.emplace_back("constant", A);
    r.extra.emplace_back("max_ratio", hi);
    finalize(r);
    r.runtime = seconds_since(t0);
    return r;
}

}  // namespace hyw
