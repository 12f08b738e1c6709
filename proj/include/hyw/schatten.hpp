#pragma once

#include <complex>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "hyw/grid.hpp"

namespace hyw {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Exponent p in [1, inf] of a Schatten class.
class SchattenExponent {
public:
    explicit SchattenExponent(double p);

    static SchattenExponent infinity() { return SchattenExponent(std::numeric_limits<double>::infinity()); }

    double value() const { return p_; }
    bool is_infinite() const { return p_ == std::numeric_limits<double>::infinity(); }

    /// q = p / (p - 1); infinity for p = 1, 1 for p = inf.
    SchattenExponent conjugate() const;

private:
    double p_;
};

/// Conjugate exponent of a finite p > 1.
double conjugate_exponent(double p);

/// Kernel k(xi, gamma) sampled on two quadrature grids. Row i belongs to
/// xi_grid.points[i], column j to gamma_grid.points[j]. Entries are scalars
/// (character-valued little group representation).
struct WeightedKernel {
    Grid1D xi_grid;
    Grid1D gamma_grid;
    ComplexMatrix values;

    void validate() const;

    /// M[i,j] = sqrt(w_i) k(xi_i, gamma_j) sqrt(w_j): the integral operator as a
    /// matrix between the weighted l2 spaces.
    ComplexMatrix operator_matrix() const;
};

/// Singular values of A in non-increasing order.
Eigen::VectorXd singular_values(const ComplexMatrix& a);

/// Schatten p-norm (sum s_i^p)^(1/p) computed from the singular values of A.
double schatten_norm(const ComplexMatrix& a, SchattenExponent p);

/// Schatten norm from precomputed singular values.
double schatten_norm_from_singular_values(const Eigen::VectorXd& s, SchattenExponent p);

/// k*(xi, gamma) = conj(k(gamma, xi)); grids are swapped.
WeightedKernel adjoint_kernel(const WeightedKernel& k);

/// Mixed norm ( sum_gamma w_gamma [ sum_xi w_xi |k(xi,gamma)|^p ]^(q/p) )^(1/q).
/// p and q must be conjugate; p = q = 2 is accepted and gives the weighted l2 norm.
double cross_norm_qpq(const WeightedKernel& k, double q, double p);

struct RussoGap {
    double lhs;  ///< ||M||_q of the operator matrix
    double rhs;  ///< cross_norm(k)^(1/2) * cross_norm(k*)^(1/2)
};

/// Both sides of the cross-norm estimate ||T_k||_q <= (||k||_{q,p,q} ||k*||_{q,p,q})^(1/2).
RussoGap russo_gap(const WeightedKernel& k, double q, double p);

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const char* what);

}  // namespace hyw
