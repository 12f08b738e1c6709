#pragma once

#include <cstddef>
#include <vector>

namespace hyw {

/// One-dimensional quadrature grid: strictly increasing points with positive masses.
struct Grid1D {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    /// Midpoint rule on [lo, hi] with n cells.
    static Grid1D midpoint(double lo, double hi, std::size_t n);

    /// Lattice {(first + i) * spacing : i = 0..n-1}, every weight equal to spacing.
    static Grid1D lattice(long first, std::size_t n, double spacing);

    /// Uniform lattice with arbitrary origin: origin + i * spacing.
    static Grid1D uniform(double origin, std::size_t n, double spacing);

    /// Spacing of a uniform grid (distance between the first two points).
    double spacing() const;

    /// Throws InputError unless the grid satisfies its invariants.
    void validate() const;
};

}  // namespace hyw
