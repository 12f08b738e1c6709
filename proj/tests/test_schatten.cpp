#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "hyw/error.hpp"
#include "hyw/schatten.hpp"
#include "support.hpp"

using namespace hyw;
using testing::rel;

TEST_CASE("schatten norm of small analytic matrices") {
    CHECK(schatten_norm(ComplexMatrix::Identity(3, 3), SchattenExponent(2)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    CHECK(schatten_norm(d, SchattenExponent::infinity()) == doctest::Approx(4.0).epsilon(1e-14));

    ComplexMatrix e = ComplexMatrix::Zero(3, 3);
    e(0, 0) = 1.0;
    e(1, 1) = 2.0;
    e(2, 2) = 2.0;
    CHECK(schatten_norm(e, SchattenExponent(3)) == doctest::Approx(std::cbrt(17.0)).epsilon(1e-14));

    CHECK(schatten_norm(ComplexMatrix::Zero(4, 3), SchattenExponent(1.5)) == 0.0);
}

TEST_CASE("p = 2 agrees with the entrywise Frobenius sum") {
    std::mt19937_64 rng(7);
    const ComplexMatrix a = testing::random_matrix(rng, 5, 5);
    double direct = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            direct += std::norm(a(i, j));
        }
    }
    CHECK(rel(schatten_norm(a, SchattenExponent(2)), std::sqrt(direct)) <= 1e-12);
}

TEST_CASE("invalid input is rejected") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(schatten_norm(a, SchattenExponent(2)), InputError);
    CHECK_THROWS_AS(SchattenExponent(0.5), InputError);
    CHECK_THROWS_AS(conjugate_exponent(1.0), InputError);
    CHECK(SchattenExponent(1).conjugate().is_infinite());
    CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0));
}

TEST_CASE("adjoint kernel") {
    std::mt19937_64 rng(11);
    const WeightedKernel k = testing::random_kernel(rng, 4, 6);

    SUBCASE("involution") {
        const WeightedKernel kk = adjoint_kernel(adjoint_kernel(k));
        CHECK(kk.values == k.values);
        CHECK(kk.xi_grid.weights == k.xi_grid.weights);
        CHECK(cross_norm_qpq(kk, 3.0, 1.5) == cross_norm_qpq(k, 3.0, 1.5));
    }
    SUBCASE("hermitian kernel is a fixed point") {
        WeightedKernel h;
        h.xi_grid = testing::unit_weights(4);
        h.gamma_grid = h.xi_grid;
        const ComplexMatrix m = testing::random_matrix(rng, 4, 4);
        h.values = m + m.adjoint();
        CHECK(adjoint_kernel(h).values.isApprox(h.values, 0.0));
    }
    SUBCASE("rank one") {
        const ComplexMatrix f = testing::random_matrix(rng, 4, 1);
        const ComplexMatrix g = testing::random_matrix(rng, 6, 1);
        WeightedKernel r = k;
        r.values = f * g.transpose();
        const WeightedKernel a = adjoint_kernel(r);
        REQUIRE(a.values.rows() == 6);
        for (Eigen::Index i = 0; i < 6; ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                CHECK(std::abs(a.values(i, j) - std::conj(g(i)) * std::conj(f(j))) <= 1e-15);
            }
        }
        CHECK(a.xi_grid.weights == k.gamma_grid.weights);
    }
}

TEST_CASE("cross norm") {
    std::mt19937_64 rng(13);
    WeightedKernel z = testing::random_kernel(rng, 3, 5);
    z.values.setZero();
    CHECK(cross_norm_qpq(z, 3.0, 1.5) == 0.0);

    WeightedKernel one;
    one.xi_grid = testing::unit_weights(1);
    one.gamma_grid = testing::unit_weights(1);
    one.values = ComplexMatrix::Constant(1, 1, Complex(3.0, -4.0));
    CHECK(cross_norm_qpq(one, 4.0, 4.0 / 3.0) == doctest::Approx(5.0).epsilon(1e-14));

    SUBCASE("separable kernel factorizes") {
        const double p = 1.25;
        const double q = 5.0;
        WeightedKernel s = testing::random_kernel(rng, 7, 9);
        const ComplexMatrix f = testing::random_matrix(rng, 7, 1);
        const ComplexMatrix g = testing::random_matrix(rng, 9, 1);
        s.values = f * g.transpose();
        double fp = 0.0;
        for (Eigen::Index i = 0; i < 7; ++i) {
            fp += s.xi_grid.weights[static_cast<std::size_t>(i)] * std::pow(std::abs(f(i)), p);
        }
        double gq = 0.0;
        for (Eigen::Index j = 0; j < 9; ++j) {
            gq += s.gamma_grid.weights[static_cast<std::size_t>(j)] * std::pow(std::abs(g(j)), q);
        }
        CHECK(rel(cross_norm_qpq(s, q, p), std::pow(fp, 1.0 / p) * std::pow(gq, 1.0 / q)) <= 1e-13);
    }
    CHECK_THROWS_AS(cross_norm_qpq(one, 3.0, 1.4), InputError);
}

TEST_CASE("russo gap examples") {
    std::mt19937_64 rng(17);
    WeightedKernel z = testing::random_kernel(rng, 3, 3);
    z.values.setZero();
    const RussoGap g0 = russo_gap(z, 3.0, 1.5);
    CHECK(g0.lhs == 0.0);
    CHECK(g0.rhs == 0.0);

    WeightedKernel k;
    k.xi_grid = testing::unit_weights(8);
    k.gamma_grid = testing::unit_weights(8);
    k.values = testing::random_matrix(rng, 8, 8);
    const RussoGap g1 = russo_gap(k, 3.0, 1.5);
    CHECK(g1.lhs <= g1.rhs * (1 + 1e-10));

    Eigen::VectorXcd d(5);
    d << 1.0, Complex(0, -2.0), 0.5, 3.0, Complex(1.0, 1.0);
    WeightedKernel dk;
    dk.xi_grid = testing::unit_weights(5);
    dk.gamma_grid = testing::unit_weights(5);
    dk.values = d.asDiagonal();
    double lq = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        lq += std::pow(std::abs(d[i]), 3.0);
    }
    const RussoGap g2 = russo_gap(dk, 3.0, 1.5);
    CHECK(rel(g2.lhs, std::cbrt(lq)) <= 1e-13);
    CHECK(g2.lhs <= g2.rhs * (1 + 1e-10));
}

TEST_CASE("property: Frobenius agreement up to 64x64") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const auto r = static_cast<Eigen::Index>(1 + rng() % 64);
        const auto c = static_cast<Eigen::Index>(1 + rng() % 64);
        const ComplexMatrix a = testing::random_matrix(rng, r, c);
        CHECK(rel(schatten_norm(a, SchattenExponent(2)), a.norm()) <= 1e-12);
    }
}

TEST_CASE("property: monotone in p") {
    std::mt19937_64 rng(23);
    const double ps[] = {1.0, 1.2, 1.5, 2.0, 3.0, 6.0};
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix a = testing::random_matrix(rng, 16, 12);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : ps) {
            const double v = schatten_norm(a, SchattenExponent(p));
            CHECK(v <= prev + 1e-10);
            prev = v;
        }
        CHECK(schatten_norm(a, SchattenExponent::infinity()) <= prev + 1e-10);
    }
}

TEST_CASE("property: unitary invariance") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = testing::random_matrix(rng, 10, 10);
        const ComplexMatrix u = testing::random_unitary(rng, 10);
        const ComplexMatrix v = testing::random_unitary(rng, 10);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const double base = schatten_norm(a, SchattenExponent(p));
            CHECK(std::abs(schatten_norm(u * a * v, SchattenExponent(p)) - base) <= 1e-10 * base);
        }
    }
}

TEST_CASE("property: triangle inequality") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix a = testing::random_matrix(rng, 9, 7);
        const ComplexMatrix b = testing::random_matrix(rng, 9, 7);
        for (const SchattenExponent p : {SchattenExponent(1), SchattenExponent(1.5), SchattenExponent(2),
                                         SchattenExponent(3), SchattenExponent::infinity()}) {
            CHECK(schatten_norm(a + b, p) <= schatten_norm(a, p) + schatten_norm(b, p) + 1e-10);
        }
    }
}

TEST_CASE("property: russo estimate on 1000 random kernels per exponent pair") {
    std::mt19937_64 rng(37);
    for (double p : {1.2, 1.5, 1.8}) {
        const double q = conjugate_exponent(p);
        int violations = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const WeightedKernel k = testing::random_kernel(rng, 1 + rng() % 9, 1 + rng() % 9);
            const RussoGap g = russo_gap(k, q, p);
            violations += g.lhs > g.rhs * (1 + 1e-10) ? 1 : 0;
        }
        CHECK(violations == 0);
    }
}
