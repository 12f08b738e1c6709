#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "hyw/grid.hpp"
#include "hyw/schatten.hpp"

namespace testing {

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double between(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = {between(rng, -1.0, 1.0), between(rng, -1.0, 1.0)};
        }
    }
    return m;
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(rng, n, n));
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

inline hyw::Grid1D random_weights(std::mt19937_64& rng, std::size_t n) {
    hyw::Grid1D g;
    for (std::size_t i = 0; i < n; ++i) {
        g.points.push_back(static_cast<double>(i));
        g.weights.push_back(between(rng, 0.05, 1.0));
    }
    return g;
}

inline hyw::Grid1D unit_weights(std::size_t n) { return hyw::Grid1D::lattice(0, n, 1.0); }

inline hyw::WeightedKernel random_kernel(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    hyw::WeightedKernel k;
    k.xi_grid = random_weights(rng, rows);
    k.gamma_grid = random_weights(rng, cols);
    k.values = random_matrix(rng, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    return k;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace testing
