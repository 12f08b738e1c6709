#include "hyw/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyw/error.hpp"

namespace hyw {

SchattenExponent::SchattenExponent(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) {
        throw InputError("Schatten exponent must lie in [1, inf], got " + std::to_string(p));
    }
}

SchattenExponent SchattenExponent::conjugate() const {
    if (is_infinite()) {
        return SchattenExponent(1.0);
    }
    if (p_ == 1.0) {
        return infinity();
    }
    return SchattenExponent(p_ / (p_ - 1.0));
}

double conjugate_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InputError("conjugate_exponent: need finite p > 1");
    }
    return p / (p - 1.0);
}

void require_finite(const ComplexMatrix& a, const char* what) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const Complex z = a(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                std::ostringstream os;
                os << what << ": non-finite entry at (" << i << ", " << j << ")";
                throw InputError(os.str());
            }
        }
    }
}

void WeightedKernel::validate() const {
    xi_grid.validate();
    gamma_grid.validate();
    if (static_cast<std::size_t>(values.rows()) != xi_grid.size() ||
        static_cast<std::size_t>(values.cols()) != gamma_grid.size()) {
        throw InputError("WeightedKernel: value shape does not match grid sizes");
    }
}

ComplexMatrix WeightedKernel::operator_matrix() const {
    ComplexMatrix m = values;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double wj = std::sqrt(gamma_grid.weights[static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            m(i, j) *= std::sqrt(xi_grid.weights[static_cast<std::size_t>(i)]) * wj;
        }
    }
    return m;
}

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
    if (a.size() == 0) {
        return Eigen::VectorXd();
    }
    require_finite(a, "singular_values");
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    if (svd.info() != Eigen::Success) {
        std::ostringstream os;
        os << "SVD did not converge for a " << a.rows() << "x" << a.cols()
           << " matrix (max |entry| = " << a.cwiseAbs().maxCoeff() << ")";
        throw NumericalError(os.str());
    }
    return svd.singularValues();
}

double schatten_norm_from_singular_values(const Eigen::VectorXd& s, SchattenExponent p) {
    if (s.size() == 0) {
        return 0.0;
    }
    const double smax = s.maxCoeff();
    if (smax == 0.0) {
        return 0.0;
    }
    if (p.is_infinite()) {
        return smax;
    }
    // Scale by the largest singular value so s^p cannot overflow for large p.
    const double e = p.value();
    double acc = 0.0;
    for (Eigen::Index i = s.size(); i-- > 0;) {
        acc += std::pow(s[i] / smax, e);
    }
    return smax * std::pow(acc, 1.0 / e);
}

double schatten_norm(const ComplexMatrix& a, SchattenExponent p) {
    return schatten_norm_from_singular_values(singular_values(a), p);
}

WeightedKernel adjoint_kernel(const WeightedKernel& k) {
    k.validate();
    WeightedKernel out;
    out.xi_grid = k.gamma_grid;
    out.gamma_grid = k.xi_grid;
    out.values = k.values.adjoint();
    return out;
}

namespace {

void require_conjugate(double q, double p) {
    if (!(p > 1.0) || !(q >= 2.0) || !std::isfinite(q)) {
        throw InputError("cross norm: need p in (1, 2] and finite q >= 2");
    }
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
        throw InputError("cross norm: p and q are not conjugate exponents");
    }
}

}  // namespace

double cross_norm_qpq(const WeightedKernel& k, double q, double p) {
    require_conjugate(q, p);
    k.validate();
    const auto& wx = k.xi_grid.weights;
    const auto& wg = k.gamma_grid.weights;
    double outer = 0.0;
    for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
        double inner = 0.0;
        for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
            const double a = std::abs(k.values(i, j));
            if (a != 0.0) {
                inner += wx[static_cast<std::size_t>(i)] * std::pow(a, p);
            }
        }
        if (inner != 0.0) {
            outer += wg[static_cast<std::size_t>(j)] * std::pow(inner, q / p);
        }
    }
    return std::pow(outer, 1.0 / q);
}

RussoGap russo_gap(const WeightedKernel& k, double q, double p) {
    require_conjugate(q, p);
    const double lhs = schatten_norm(k.operator_matrix(), SchattenExponent(q));
    const double c = cross_norm_qpq(k, q, p);
    const double cstar = cross_norm_qpq(adjoint_kernel(k), q, p);
    return {lhs, std::sqrt(c) * std::sqrt(cstar)};
}

}  // namespace hyw
