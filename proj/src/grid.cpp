#include "hyw/grid.hpp"

#include <cmath>
#include <string>

#include "hyw/error.hpp"

namespace hyw {

Grid1D Grid1D::midpoint(double lo, double hi, std::size_t n) {
    if (n == 0 || !(hi > lo)) {
        throw InputError("Grid1D::midpoint: need n > 0 and hi > lo");
    }
    const double h = (hi - lo) / static_cast<double>(n);
    Grid1D g;
    g.points.resize(n);
    g.weights.assign(n, h);
    for (std::size_t i = 0; i < n; ++i) {
        g.points[i] = lo + (static_cast<double>(i) + 0.5) * h;
    }
    return g;
}

Grid1D Grid1D::lattice(long first, std::size_t n, double spacing) {
    Grid1D g;
    g.points.resize(n);
    g.weights.assign(n, spacing);
    for (std::size_t i = 0; i < n; ++i) {
        g.points[i] = static_cast<double>(first + static_cast<long>(i)) * spacing;
    }
    return g;
}

Grid1D Grid1D::uniform(double origin, std::size_t n, double spacing) {
    Grid1D g;
    g.points.resize(n);
    g.weights.assign(n, spacing);
    for (std::size_t i = 0; i < n; ++i) {
        g.points[i] = origin + static_cast<double>(i) * spacing;
    }
    return g;
}

double Grid1D::spacing() const {
    if (points.size() < 2) {
        return weights.empty() ? 0.0 : weights.front();
    }
    return points[1] - points[0];
}

void Grid1D::validate() const {
    if (points.size() != weights.size()) {
        throw InputError("Grid1D: points/weights length mismatch");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) {
            throw InputError("Grid1D: non-finite point at index " + std::to_string(i));
        }
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw InputError("Grid1D: non-positive weight at index " + std::to_string(i));
        }
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw InputError("Grid1D: points not strictly increasing at index " + std::to_string(i));
        }
    }
}

}  // namespace hyw
