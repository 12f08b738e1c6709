#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyw/grid.hpp"
#include "hyw/group_model.hpp"

namespace hyw {

struct GridExtents {
    double n_lo = -8.0;
    double n_hi = 8.0;
    double h_lo = -4.0;
    double h_hi = 4.0;
};

/// Product grid for G: dim_N copies of the N axis and the H axis in grid coordinates.
struct Grids {
    std::vector<Grid1D> n;
    Grid1D h;
    GridExtents extents;

    std::size_t n_total() const;
    /// Coordinates of flattened N index `idx` (first axis slowest).
    NVector n_point(std::size_t idx) const;
    double n_cell_weight(std::size_t idx) const;
};

/// Uniform midpoint grids. Throws InputError for fewer than 8 points per axis or
/// empty extents.
Grids make_grids(const GroupExtensionModel& model, std::size_t n_points_N, std::size_t n_points_H,
                 const GridExtents& extents);

/// Same extents, twice the points on every axis.
Grids refine(const GroupExtensionModel& model, const Grids& grids);

enum class TestFunctionKind { gaussian, bump, random_bandlimited };

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct TestFunctionSpec {
    TestFunctionKind kind = TestFunctionKind::gaussian;

    // gaussian / bump: one separable profile.
    NVector center;
    double t_center = 0.0;
    NVector width;          // per N axis; bump: support radius
    double t_width = 0.5;
    NVector frequency;      // modulation exp(2 pi i <f, n>)

    // random_bandlimited: sum of modulated Gaussians with parameters drawn from ranges.
    std::uint64_t seed = 0;
    std::size_t components = 3;
    double center_radius = 1.0;     // |n_d - 0| <= center_radius
    double t_center_radius = 0.5;
    Range width_range{0.5, 1.0};
    Range t_width_range{0.3, 0.45};
    std::vector<Range> frequency_abs_range;  // per N axis, |f_d| in [lo, hi], random sign

    void validate(int dim_N) const;
};

/// Gaussian centred at the origin with the given widths.
TestFunctionSpec gaussian_spec(const NVector& width, double t_width, NVector frequency = {});

/// Random band-limited fixture with ranges suited to the model's default desk grids.
TestFunctionSpec random_spec(const GroupExtensionModel& model, std::uint64_t seed);

/// Test function g sampled on (n, t) grid points; column j is the slice g_{h_j}.
struct SampledFunction {
    GroupExtensionModel model;
    Grids grids;
    Eigen::MatrixXcd values;  // n_total x n_H
    /// Haar L1 mass in the outermost grid layer relative to the total.
    double truncation_mass = 0.0;

    void validate() const;
};

SampledFunction sample(const TestFunctionSpec& spec, const Grids& grids, const GroupExtensionModel& model);

/// (sum |g|^p w_N Delta_G(h) w_H)^(1/p) with respect to the Haar decomposition.
double lp_norm_G(const SampledFunction& g, double p);

/// L^p norm of one N slice, (sum_n |g(n, h_j)|^p w_N)^(1/p).
double lp_norm_slice(const SampledFunction& g, std::size_t h_index, double p);

SampledFunction scaled(const SampledFunction& g, std::complex<double> c);

/// Flat binary array with a one-line text header "HYW1 <dims> <extents> <seed>",
/// followed by little-endian float64 values in row-major order.
struct ArrayFile {
    std::vector<std::size_t> dims;
    std::vector<std::pair<double, double>> extents;
    std::uint64_t seed = 0;
    std::vector<double> data;
};

void write_array_file(const std::filesystem::path& path, const ArrayFile& file);
ArrayFile read_array_file(const std::filesystem::path& path);

/// Row-major (N axes..., H, re/im) layout of a sampled function.
ArrayFile to_array_file(const SampledFunction& g, std::uint64_t seed);

/// FNV-1a over the little-endian bytes of the sample values (re, im interleaved).
std::uint64_t checksum(const SampledFunction& g);

}  // namespace hyw
