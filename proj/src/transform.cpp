#include "hyw/transform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "hyw/error.hpp"
#include "hyw/parallel.hpp"

namespace hyw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer fftw_buffer(std::size_t n) {
    auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (raw == nullptr) {
        throw NumericalError("fftw_malloc failed");
    }
    return FftwBuffer(raw);
}

double h_spacing(const SampledFunction& g) {
    if (g.grids.h.size() < 2) {
        throw InputError("transform: H-grid needs at least two points");
    }
    return g.grids.h.spacing();
}

}  // namespace

CharacterSlice::CharacterSlice(const SampledFunction& g) : g_(&g) { g.validate(); }

CharacterSlice fourier_along_N(const SampledFunction& g) { return CharacterSlice(g); }

std::vector<double> CharacterSlice::nyquist() const {
    std::vector<double> out;
    for (const auto& axis : g_->grids.n) {
        out.push_back(0.5 / axis.spacing());
    }
    return out;
}

std::complex<double> CharacterSlice::evaluate(std::size_t h_index, const CharacterParam& omega) const {
    const auto& grids = g_->grids;
    if (omega.size() != grids.n.size()) {
        throw InputError("CharacterSlice::evaluate: parameter dimension mismatch");
    }
    if (h_index >= grids.h.size()) {
        throw InputError("CharacterSlice::evaluate: h index out of range");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < grids.n_total(); ++i) {
        const NVector n = grids.n_point(i);
        double phase = 0.0;
        for (std::size_t d = 0; d < n.size(); ++d) {
            phase += omega[d] * n[d];
        }
        acc += g_->values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h_index)) *
               std::polar(grids.n_cell_weight(i), -kTwoPi * phase);
    }
    return acc;
}

Eigen::MatrixXcd CharacterSlice::evaluate_line(std::span<const double> first, const CharacterParam& tail) const {
    const auto& axes = g_->grids.n;
    if (tail.size() + 1 != axes.size()) {
        throw InputError("CharacterSlice::evaluate_line: tail dimension mismatch");
    }
    // Contract the trailing axes one at a time at the fixed tail frequencies.
    Eigen::MatrixXcd current;
    const Eigen::MatrixXcd* source = &g_->values;
    for (std::size_t d = axes.size(); d-- > 1;) {
        const Grid1D& axis = axes[d];
        const auto m = static_cast<Eigen::Index>(axis.size());
        Eigen::VectorXcd v(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            v[k] = std::polar(axis.weights[ku], -kTwoPi * tail[d - 1] * axis.points[ku]);
        }
        const Eigen::Index rows = source->rows() / m;
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(rows, source->cols());
        for (Eigen::Index r = 0; r < rows; ++r) {
            next.row(r) = v.transpose() * source->middleRows(r * m, m);
        }
        current = std::move(next);
        source = &current;
    }
    const Grid1D& axis0 = axes.front();
    const auto m0 = static_cast<Eigen::Index>(axis0.size());
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(first.size()), m0);
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index k = 0; k < m0; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            e(i, k) = std::polar(axis0.weights[ku], -kTwoPi * first[static_cast<std::size_t>(i)] * axis0.points[ku]);
        }
    }
    return e * (*source);
}

ReciprocalSlice CharacterSlice::on_reciprocal_grid(std::size_t h_index, std::size_t pad) const {
    const auto& axes = g_->grids.n;
    if (pad == 0) {
        throw InputError("on_reciprocal_grid: pad must be positive");
    }
    if (h_index >= g_->grids.h.size()) {
        throw InputError("on_reciprocal_grid: h index out of range");
    }
    const std::size_t dim = axes.size();
    std::vector<int> sizes(dim);
    std::size_t total = 1;
    for (std::size_t d = 0; d < dim; ++d) {
        sizes[d] = static_cast<int>(pad * axes[d].size());
        total *= static_cast<std::size_t>(sizes[d]);
    }
    FftwBuffer in = fftw_buffer(total);
    FftwBuffer out = fftw_buffer(total);
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dim), sizes.data(), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw NumericalError("fftw_plan_dft failed");
    }
    for (std::size_t i = 0; i < total; ++i) {
        in[i][0] = 0.0;
        in[i][1] = 0.0;
    }
    const std::size_t nn = g_->grids.n_total();
    for (std::size_t i = 0; i < nn; ++i) {
        // Map the flattened unpadded index to the padded layout.
        std::size_t idx = i;
        std::size_t padded = 0;
        std::size_t stride = 1;
        for (std::size_t d = dim; d-- > 0;) {
            const std::size_t m = axes[d].size();
            padded += (idx % m) * stride;
            idx /= m;
            stride *= static_cast<std::size_t>(sizes[d]);
        }
        const auto z = g_->values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h_index));
        in[padded][0] = z.real();
        in[padded][1] = z.imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    ReciprocalSlice res;
    res.axes.resize(dim);
    std::vector<std::vector<std::complex<double>>> axis_phase(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const std::size_t m = static_cast<std::size_t>(sizes[d]);
        const double h = axes[d].spacing();
        const double df = 1.0 / (static_cast<double>(m) * h);
        const double x0 = axes[d].points.front();
        res.axes[d] = Grid1D::uniform(-static_cast<double>(m / 2) * df, m, df);
        axis_phase[d].resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            axis_phase[d][k] = std::polar(h, -kTwoPi * res.axes[d].points[k] * x0);
        }
    }
    res.values.resize(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        // flat indexes the shifted (ascending-frequency) layout.
        std::size_t idx = flat;
        std::size_t src = 0;
        std::size_t stride = 1;
        std::complex<double> factor{1.0, 0.0};
        for (std::size_t d = dim; d-- > 0;) {
            const std::size_t m = static_cast<std::size_t>(sizes[d]);
            const std::size_t k = idx % m;
            idx /= m;
            const std::size_t fft_index = (k + m - m / 2) % m;
            src += fft_index * stride;
            stride *= m;
            factor *= axis_phase[d][k];
        }
        res.values[flat] = factor * std::complex<double>(out[src][0], out[src][1]);
    }
    return res;
}

FormalDimensionOperator make_formal_dimension(const GroupExtensionModel& model, const Grid1D& grid) {
    FormalDimensionOperator K;
    K.grid = grid;
    K.diagonal.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        K.diagonal[i] = model.modular_on_H(model.h_from_coordinate(grid.points[i]));
    }
    return K;
}

WeightedKernel apply_formal_dimension(const WeightedKernel& k, const FormalDimensionOperator& K, double e) {
    k.validate();
    if (K.grid.size() != k.gamma_grid.size() || K.diagonal.size() != K.grid.size()) {
        throw InputError("apply_formal_dimension: grid size mismatch");
    }
    const double h = k.gamma_grid.size() > 1 ? k.gamma_grid.spacing() : 1.0;
    for (std::size_t j = 0; j < K.grid.size(); ++j) {
        if (std::abs(K.grid.points[j] - k.gamma_grid.points[j]) > 1e-9 * std::max(1.0, h)) {
            throw InputError("apply_formal_dimension: grid points do not match");
        }
    }
    WeightedKernel out = k;
    if (e == 0.0) {
        return out;
    }
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        const double d = K.diagonal[static_cast<std::size_t>(j)];
        if (d != 1.0) {
            out.values.col(j) *= std::pow(d, e);
        }
    }
    return out;
}

WeightedKernel assemble_kernel(const CharacterSlice& slice, const DualOrbitModel& dual, const CharacterParam& sigma0,
                               const KernelOptions& options, KernelDiagnostics* diagnostics) {
    const SampledFunction& g = slice.function();
    const GroupExtensionModel& model = g.model;
    if (static_cast<int>(sigma0.size()) != model.dim_N) {
        throw InputError("assemble_kernel: sigma0 has wrong dimension");
    }
    const double h = h_spacing(g);
    const std::vector<double> band = options.band.empty() ? slice.nyquist() : options.band;
    const double exclusion = dual.exclusion_in_window ? options.exclusion_radius : 0.0;

    KernelDiagnostics diag;
    auto [lo, hi] = dual.orbit_window(sigma0, band, exclusion);
    if (lo < -options.max_abs_coordinate) {
        lo = -options.max_abs_coordinate;
        diag.window_capped = true;
    }
    if (hi > options.max_abs_coordinate) {
        hi = options.max_abs_coordinate;
        diag.window_capped = true;
    }
    diag.window_lo = lo;
    diag.window_hi = hi;

    const Grid1D& sgrid = g.grids.h;
    const std::size_t ns = sgrid.size();
    const long row_first = static_cast<long>(std::ceil(lo / h - 1e-9));
    const long row_last = static_cast<long>(std::floor(hi / h + 1e-9));
    if (!(hi >= lo) || row_last < row_first) {
        WeightedKernel empty;
        empty.values.resize(0, 0);
        if (diagnostics != nullptr) {
            *diagnostics = diag;
        }
        return empty;
    }
    const auto nrows = static_cast<std::size_t>(row_last - row_first + 1);
    diag.rows_window = nrows;

    // Characters xi . sigma0 along the rows; sigma(g) pairs g with chi(n), which is ghat(-chi).
    std::vector<CharacterParam> chars(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
        const double t = static_cast<double>(row_first + static_cast<long>(i)) * h;
        chars[i] = model.dual_action_fn(model.h_from_coordinate(t), sigma0);
    }
    const std::size_t dim = sigma0.size();
    bool shared_tail = true;
    for (std::size_t i = 1; i < nrows && shared_tail; ++i) {
        for (std::size_t d = 1; d < dim; ++d) {
            shared_tail = shared_tail && chars[i][d] == chars[0][d];
        }
    }
    Eigen::MatrixXcd ghat(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ns));
    if (shared_tail) {
        std::vector<double> first(nrows);
        for (std::size_t i = 0; i < nrows; ++i) {
            first[i] = -chars[i][0];
        }
        CharacterParam tail(dim - 1);
        for (std::size_t d = 1; d < dim; ++d) {
            tail[d - 1] = -chars[0][d];
        }
        ghat = slice.evaluate_line(first, tail);
    } else {
        for (std::size_t i = 0; i < nrows; ++i) {
            CharacterParam neg = chars[i];
            for (double& c : neg) {
                c = -c;
            }
            for (std::size_t k = 0; k < ns; ++k) {
                ghat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = slice.evaluate(k, neg);
            }
        }
    }

    std::vector<double> delta_s(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        delta_s[k] = model.modular_on_H(model.h_from_coordinate(sgrid.points[k]));
    }

    // Column j <-> gamma_j = xi_0 - s_{ns-1} + j h, so xi_i - gamma_j = s_{ns-1+i-j}.
    const std::size_t ncols = nrows + ns - 1;
    Eigen::MatrixXcd vals = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
    for (std::size_t i = 0; i < nrows; ++i) {
        const double xi_t = static_cast<double>(row_first + static_cast<long>(i)) * h;
        for (std::size_t k = 0; k < ns; ++k) {
            const std::size_t j = ns - 1 + i - k;
            std::complex<double> entry = ghat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * delta_s[k];
            if (!model.cocycle_trivial) {
                const NVector lam =
                    model.cocycle_fn(model.h_from_coordinate(sgrid.points[k]), model.h_from_coordinate(xi_t));
                entry *= character_value(sigma0, lam);
            }
            vals(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry;
        }
    }

    // Trim negligible leading/trailing rows, then columns.
    const double w2 = h * h;
    Eigen::VectorXd row_e = vals.rowwise().squaredNorm() * w2;
    const double ref = options.drop_reference > 0.0 ? options.drop_reference : row_e.sum();
    double budget = options.drop_tolerance * ref;
    std::size_t r0 = 0;
    std::size_t r1 = nrows;
    while (r0 < r1 && row_e[static_cast<Eigen::Index>(r0)] <= budget) {
        budget -= row_e[static_cast<Eigen::Index>(r0)];
        diag.dropped_energy += row_e[static_cast<Eigen::Index>(r0)];
        ++r0;
    }
    while (r1 > r0 && row_e[static_cast<Eigen::Index>(r1 - 1)] <= budget) {
        budget -= row_e[static_cast<Eigen::Index>(r1 - 1)];
        diag.dropped_energy += row_e[static_cast<Eigen::Index>(r1 - 1)];
        --r1;
    }
    if (r0 == r1) {
        WeightedKernel empty;
        empty.values.resize(0, 0);
        diag.rows_kept = 0;
        if (diagnostics != nullptr) {
            *diagnostics = diag;
        }
        return empty;
    }
    const auto kept_rows = vals.middleRows(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(r1 - r0));
    Eigen::VectorXd col_e = kept_rows.colwise().squaredNorm().transpose() * w2;
    std::size_t c0 = 0;
    std::size_t c1 = ncols;
    while (c0 < c1 && col_e[static_cast<Eigen::Index>(c0)] <= budget) {
        budget -= col_e[static_cast<Eigen::Index>(c0)];
        diag.dropped_energy += col_e[static_cast<Eigen::Index>(c0)];
        ++c0;
    }
    while (c1 > c0 && col_e[static_cast<Eigen::Index>(c1 - 1)] <= budget) {
        budget -= col_e[static_cast<Eigen::Index>(c1 - 1)];
        diag.dropped_energy += col_e[static_cast<Eigen::Index>(c1 - 1)];
        --c1;
    }

    WeightedKernel k;
    const double xi0 = static_cast<double>(row_first + static_cast<long>(r0)) * h;
    const double gamma0 = static_cast<double>(row_first) * h - sgrid.points.back() + static_cast<double>(c0) * h;
    k.xi_grid = Grid1D::uniform(xi0, r1 - r0, h);
    k.gamma_grid = Grid1D::uniform(gamma0, c1 - c0, h);
    k.values = kept_rows.middleCols(static_cast<Eigen::Index>(c0), static_cast<Eigen::Index>(c1 - c0));
    diag.rows_kept = r1 - r0;
    diag.cols_kept = c1 - c0;
    if (diagnostics != nullptr) {
        *diagnostics = diag;
    }
    return k;
}

Eigen::VectorXcd induced_rep_apply(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                   const GroupElement& x, const Eigen::VectorXcd& f, const Grid1D& source,
                                   const Grid1D& target) {
    if (static_cast<std::size_t>(f.size()) != source.size()) {
        throw InputError("induced_rep_apply: vector length does not match the source grid");
    }
    if (static_cast<int>(x.n.size()) != model.dim_N || static_cast<int>(sigma0.size()) != model.dim_N) {
        throw InputError("induced_rep_apply: dimension mismatch");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target.size()));
    if (target.size() == 0 || source.size() == 0) {
        return out;
    }
    const double h = source.size() > 1 ? source.spacing() : source.weights.front();
    if (target.size() > 1 && std::abs(target.spacing() - h) > 1e-12 * h) {
        throw InputError("induced_rep_apply: source and target spacings differ");
    }
    const double shift = model.coordinate_from_h(x.h);
    const double offset = (target.points.front() - shift - source.points.front()) / h;
    const double rounded = std::round(offset);
    if (std::abs(offset - rounded) > 1e-8) {
        throw InputError("induced_rep_apply: H-component is not a grid shift (offset " + std::to_string(offset) +
                         " cells)");
    }
    const auto base = static_cast<long>(rounded);
    for (std::size_t i = 0; i < target.size(); ++i) {
        const long j = base + static_cast<long>(i);
        if (j < 0 || j >= static_cast<long>(source.size())) {
            continue;
        }
        const double xi = model.h_from_coordinate(target.points[i]);
        std::complex<double> factor = character_value(model.dual_action_fn(xi, sigma0), x.n);
        if (!model.cocycle_trivial) {
            factor *= character_value(sigma0, model.cocycle_fn(x.h, xi));
        }
        out[static_cast<Eigen::Index>(i)] = factor * f[j];
    }
    return out;
}

Eigen::MatrixXcd induced_rep_matrix(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                    const GroupElement& x, const Grid1D& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e[j] = 1.0;
        m.col(j) = induced_rep_apply(model, sigma0, x, e, grid);
    }
    return m;
}

FieldComponent field_component(const CharacterSlice& slice, const DualOrbitModel& dual, const TransversalPoint& point,
                               double p, const KernelOptions& options) {
    const double q = conjugate_exponent(p);
    FieldComponent c;
    c.sigma0 = point;
    const WeightedKernel raw = assemble_kernel(slice, dual, point.chi, options, &c.diagnostics);
    if (raw.values.size() == 0) {
        c.kernel = raw;
        c.matrix.resize(0, 0);
        return c;
    }
    const FormalDimensionOperator K = make_formal_dimension(slice.function().model, raw.gamma_grid);
    c.kernel = apply_formal_dimension(raw, K, 1.0 / q);
    c.matrix = c.kernel.operator_matrix();
    return c;
}

FourierField fourier_transform_p(const SampledFunction& g, const DualOrbitModel& dual, double p,
                                 const FieldOptions& options) {
    if (!(p > 1.0) || p > 2.0) {
        throw InputError("fourier_transform_p: need 1 < p <= 2");
    }
    const CharacterSlice slice(g);
    const std::vector<TransversalPoint> points = dual.transversal(options.transversal);
    FourierField field;
    field.p = p;
    field.q = conjugate_exponent(p);
    field.components.resize(points.size());
    parallel_for(points.size(), options.threads,
                 [&](std::size_t i) { field.components[i] = field_component(slice, dual, points[i], p, options.kernel); });
    return field;
}

double bq_oplus_norm(const FourierField& field, double q) {
    if (!(q >= 2.0) || std::abs(1.0 / field.p + 1.0 / q - 1.0) > 1e-12) {
        throw InputError("bq_oplus_norm: q must be the conjugate exponent of the field");
    }
    double acc = 0.0;
    for (const FieldComponent& c : field.components) {
        if (c.matrix.size() == 0) {
            continue;
        }
        const double s = schatten_norm(c.matrix, SchattenExponent(q));
        acc += c.sigma0.weight * std::pow(s, q);
    }
    return std::pow(acc, 1.0 / q);
}

std::vector<double> bq_oplus_norms(const SampledFunction& g, const DualOrbitModel& dual, std::span<const double> ps,
                                   const FieldOptions& options) {
    for (double p : ps) {
        if (!(p > 1.0) || p > 2.0) {
            throw InputError("bq_oplus_norms: need 1 < p <= 2");
        }
    }
    const CharacterSlice slice(g);
    const std::vector<TransversalPoint> points = dual.transversal(options.transversal);
    const bool shared = g.model.unimodular;
    // terms(i, j) = weight_i * ||M_i(p_j)||_q^q
    Eigen::MatrixXd terms = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()),
                                                  static_cast<Eigen::Index>(ps.size()));
    parallel_for(points.size(), options.threads, [&](std::size_t i) {
        const WeightedKernel raw = assemble_kernel(slice, dual, points[i].chi, options.kernel);
        if (raw.values.size() == 0) {
            return;
        }
        const FormalDimensionOperator K = make_formal_dimension(g.model, raw.gamma_grid);
        Eigen::VectorXd sv;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const double q = conjugate_exponent(ps[j]);
            if (!shared || sv.size() == 0) {
                sv = singular_values(apply_formal_dimension(raw, K, 1.0 / q).operator_matrix());
            }
            const double s = schatten_norm_from_singular_values(sv, SchattenExponent(q));
            terms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = points[i].weight * std::pow(s, q);
        }
    });
    std::vector<double> out(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
        out[j] = std::pow(terms.col(static_cast<Eigen::Index>(j)).sum(), 1.0 / conjugate_exponent(ps[j]));
    }
    return out;
}

double exclusion_radius_for_budget(const CharacterSlice& slice, double budget, double max_radius) {
    const SampledFunction& g = slice.function();
    const std::size_t dim = g.grids.n.size();
    if (budget <= 0.0 || !(max_radius > 0.0)) {
        return 0.0;
    }
    const double norm2 = std::pow(lp_norm_G(g, 2.0), 2);
    if (norm2 == 0.0) {
        return max_radius;
    }
    // Plancherel mass density F(l) across the locus {omega_last = 0}, sampled at
    // l = +-k dl, then integrated outward with the trapezoid rule.
    constexpr std::size_t kSteps = 128;
    const double dl = max_radius / static_cast<double>(kSteps);
    std::vector<double> ell(2 * kSteps + 1);
    for (std::size_t k = 0; k < ell.size(); ++k) {
        ell[k] = (static_cast<double>(k) - static_cast<double>(kSteps)) * dl;
    }
    Eigen::VectorXd hw(static_cast<Eigen::Index>(g.grids.h.size()));
    for (std::size_t k = 0; k < g.grids.h.size(); ++k) {
        hw[static_cast<Eigen::Index>(k)] =
            g.grids.h.weights[k] * g.model.modular_on_H(g.model.h_from_coordinate(g.grids.h.points[k]));
    }
    std::vector<double> density(ell.size());
    if (dim == 1) {
        const Eigen::VectorXd d = slice.evaluate_line(ell, {}).cwiseAbs2() * hw;
        for (std::size_t k = 0; k < ell.size(); ++k) {
            density[k] = d[static_cast<Eigen::Index>(k)];
        }
    } else if (dim == 2) {
        const Grid1D& axis = g.grids.n.front();
        const std::size_t m = axis.size();
        const double df = 1.0 / (static_cast<double>(m) * axis.spacing());
        std::vector<double> mu(m);
        for (std::size_t k = 0; k < m; ++k) {
            mu[k] = (static_cast<double>(k) - static_cast<double>(m / 2)) * df;
        }
        for (std::size_t k = 0; k < ell.size(); ++k) {
            const Eigen::MatrixXd a = slice.evaluate_line(mu, CharacterParam{ell[k]}).cwiseAbs2();
            density[k] = (a * hw).sum() * df;
        }
    } else {
        throw InputError("exclusion_radius_for_budget: supports dim_N <= 2");
    }
    const double allowed = budget * norm2;
    double mass = 0.0;
    for (std::size_t k = 0; k < kSteps; ++k) {
        const double step = 0.5 * dl *
                            (density[kSteps + k] + density[kSteps + k + 1] + density[kSteps - k] +
                             density[kSteps - k - 1]);
        if (mass + step > allowed) {
            const double frac = step > 0.0 ? (allowed - mass) / step : 0.0;
            return (static_cast<double>(k) + frac) * dl;
        }
        mass += step;
    }
    return max_radius;
}

void export_field(const FourierField& field, const std::filesystem::path& prefix) {
    nlohmann::json manifest;
    manifest["format"] = "HYWFIELD 1";
    manifest["p"] = field.p;
    manifest["q"] = field.q;
    manifest["components"] = nlohmann::json::array();
    for (std::size_t i = 0; i < field.components.size(); ++i) {
        const FieldComponent& c = field.components[i];
        std::ostringstream name;
        name << prefix.filename().string() << ".k" << i << ".bin";
        const std::filesystem::path file = prefix.parent_path() / name.str();
        nlohmann::json entry;
        entry["sigma0"] = c.sigma0.chi;
        entry["weight"] = c.sigma0.weight;
        entry["rows"] = c.matrix.rows();
        entry["cols"] = c.matrix.cols();
        if (c.matrix.size() > 0) {
            ArrayFile a;
            a.dims = {static_cast<std::size_t>(c.matrix.rows()), static_cast<std::size_t>(c.matrix.cols()), 2};
            a.extents = {{c.kernel.xi_grid.points.front(), c.kernel.xi_grid.points.back()},
                         {c.kernel.gamma_grid.points.front(), c.kernel.gamma_grid.points.back()}};
            a.data.reserve(static_cast<std::size_t>(c.matrix.size()) * 2);
            for (Eigen::Index r = 0; r < c.matrix.rows(); ++r) {
                for (Eigen::Index s = 0; s < c.matrix.cols(); ++s) {
                    a.data.push_back(c.matrix(r, s).real());
                    a.data.push_back(c.matrix(r, s).imag());
                }
            }
            write_array_file(file, a);
            entry["file"] = name.str();
            entry["xi_origin"] = c.kernel.xi_grid.points.front();
            entry["gamma_origin"] = c.kernel.gamma_grid.points.front();
            entry["spacing"] = c.kernel.xi_grid.weights.front();
        }
        manifest["components"].push_back(entry);
    }
    std::ofstream out(prefix.string() + ".manifest.json");
    if (!out) {
        throw InputError("export_field: cannot write manifest for " + prefix.string());
    }
    out << manifest.dump(2) << '\n';
}

}  // namespace hyw
