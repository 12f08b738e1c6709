#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hyw/discretize.hpp"
#include "hyw/group_model.hpp"
#include "hyw/schatten.hpp"

namespace hyw {

/// Values of a slice transform on the reciprocal (FFT) grid.
struct ReciprocalSlice {
    std::vector<Grid1D> axes;            // frequencies per N axis, weights = frequency spacing
    std::vector<std::complex<double>> values;  // row-major over axes
};

/// Fourier transforms of the N slices of g:
///   ghat_h(omega) = sum_n g(n, h) exp(-2 pi i <omega, n>) w_N(n).
/// Holds a reference to g, which must outlive the slice.
class CharacterSlice {
public:
    explicit CharacterSlice(const SampledFunction& g);

    const SampledFunction& function() const { return *g_; }

    /// Direct summation at an arbitrary parameter.
    std::complex<double> evaluate(std::size_t h_index, const CharacterParam& omega) const;

    /// ghat at (first[i], tail...) for all h; result is first.size() x n_H.
    Eigen::MatrixXcd evaluate_line(std::span<const double> first, const CharacterParam& tail) const;

    /// FFT path on the reciprocal grid, zero-padded by `pad` along every axis.
    ReciprocalSlice on_reciprocal_grid(std::size_t h_index, std::size_t pad = 1) const;

    /// Nyquist frequency 1 / (2 h_d) per N axis.
    std::vector<double> nyquist() const;

private:
    const SampledFunction* g_;
};

CharacterSlice fourier_along_N(const SampledFunction& g);

/// (K eta)(h) = Delta_G(h) eta(h) on a grid.
struct FormalDimensionOperator {
    Grid1D grid;
    std::vector<double> diagonal;
};

FormalDimensionOperator make_formal_dimension(const GroupExtensionModel& model, const Grid1D& grid);

/// k'(xi, gamma) = k(xi, gamma) Delta_G(gamma)^e.
WeightedKernel apply_formal_dimension(const WeightedKernel& k, const FormalDimensionOperator& K, double e);

struct KernelOptions {
    /// |omega_d| <= band[d]; empty means the N-grid Nyquist frequencies.
    std::vector<double> band;
    /// Radius of the excluded neighbourhood of the non-free locus (ax+b: |omega| < r).
    double exclusion_radius = 0.0;
    /// Hard cap |t| <= max_abs_coordinate on representation grid points.
    double max_abs_coordinate = 48.0;
    /// Leading/trailing rows and columns whose summed weighted |k|^2 stays below
    /// drop_tolerance * reference are removed.
    double drop_tolerance = 1e-15;
    /// Absolute energy reference; <= 0 uses the kernel's own weighted l2 mass.
    double drop_reference = 0.0;
};

struct KernelDiagnostics {
    std::size_t rows_window = 0;
    std::size_t rows_kept = 0;
    std::size_t cols_kept = 0;
    double dropped_energy = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool window_capped = false;
};

/// Scalar kernel of sigma(g) for sigma = Ind sigma0:
///   k(xi, gamma) = (xi . sigma0)(g_{xi gamma^-1}) sigma0(Lambda(xi gamma^-1, xi)) Delta_G(xi gamma^-1).
/// Rows sit on the lattice h Z inside the orbit window; columns on the lattice
/// shifted so that xi - gamma runs over the H-grid of g.
WeightedKernel assemble_kernel(const CharacterSlice& slice, const DualOrbitModel& dual, const CharacterParam& sigma0,
                               const KernelOptions& options, KernelDiagnostics* diagnostics = nullptr);

/// (sigma(x) f)(xi) = (xi . sigma0)(n) sigma0(Lambda(gamma, xi)) f(gamma^-1 xi), with f on
/// `source` and the result on `target`; outside the source grid f is zero.
/// Throws InputError if gamma is not a lattice shift between the two grids.
Eigen::VectorXcd induced_rep_apply(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                   const GroupElement& x, const Eigen::VectorXcd& f, const Grid1D& source,
                                   const Grid1D& target);

inline Eigen::VectorXcd induced_rep_apply(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                          const GroupElement& x, const Eigen::VectorXcd& f, const Grid1D& grid) {
    return induced_rep_apply(model, sigma0, x, f, grid, grid);
}

/// sigma(x) as a matrix (columns are images of basis vectors).
Eigen::MatrixXcd induced_rep_matrix(const GroupExtensionModel& model, const CharacterParam& sigma0,
                                    const GroupElement& x, const Grid1D& grid);

struct FieldOptions {
    TransversalOptions transversal;
    KernelOptions kernel;
    unsigned threads = 1;
};

struct FieldComponent {
    TransversalPoint sigma0;
    WeightedKernel kernel;  ///< kernel of [sigma(g) K^(1/q)]
    ComplexMatrix matrix;   ///< sqrt(w) kernel sqrt(w)
    KernelDiagnostics diagnostics;
};

/// F^p(g)(sigma) = [sigma(g) K_sigma^(1/q)] sampled on the transversal.
struct FourierField {
    double p = 2.0;
    double q = 2.0;
    std::vector<FieldComponent> components;
};

/// Builds one component; shared by fourier_transform_p and the streaming checks.
FieldComponent field_component(const CharacterSlice& slice, const DualOrbitModel& dual, const TransversalPoint& point,
                               double p, const KernelOptions& options);

FourierField fourier_transform_p(const SampledFunction& g, const DualOrbitModel& dual, double p,
                                 const FieldOptions& options);

/// ( sum_sigma0 nu_G(sigma0) ||M_sigma0||_q^q )^(1/q).
double bq_oplus_norm(const FourierField& field, double q);

/// bq_oplus_norm(fourier_transform_p(g, p), q(p)) for each p, assembling every
/// kernel once. Unimodular groups share one SVD per sigma0 across all p.
std::vector<double> bq_oplus_norms(const SampledFunction& g, const DualOrbitModel& dual, std::span<const double> ps,
                                   const FieldOptions& options);

/// Radius r of the neighbourhood of the non-free locus whose estimated Plancherel
/// mass equals budget * ||g||_2^2, clamped to (0, max_radius].
double exclusion_radius_for_budget(const CharacterSlice& slice, double budget, double max_radius);

/// Writes <prefix>.manifest.json and one HYW1 array file per component.
void export_field(const FourierField& field, const std::filesystem::path& prefix);

}  // namespace hyw
