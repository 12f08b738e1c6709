#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "hyw/discretize.hpp"
#include "hyw/error.hpp"
#include "support.hpp"

using namespace hyw;

namespace {

constexpr double pi = std::numbers::pi;

// Closed form of the ax+b L^p norm of exp(-b^2/2w^2 - t^2/2s^2) with density e^-t db dt.
double axb_gaussian_lp(double w, double s, double p) {
    const double nb = w * std::sqrt(2 * pi / p);
    const double nt = s * std::sqrt(2 * pi / p) * std::exp(s * s / (2 * p));
    return std::pow(nb * nt, 1.0 / p);
}

}  // namespace

TEST_CASE("grid construction") {
    const auto he = make_heisenberg_model();
    const Grids g = make_grids(he, 64, 64, GridExtents{});
    REQUIRE(g.n.size() == 2);
    CHECK(g.n[0].spacing() == doctest::Approx(0.25));
    CHECK(g.n[1].weights[7] == doctest::Approx(0.25));
    CHECK(g.n_total() == 64 * 64);

    const auto ax = make_axb_model();
    const Grids a = make_grids(ax, 128, 128, GridExtents{});
    CHECK(a.h.weights[0] == doctest::Approx(8.0 / 128));
    CHECK(a.h.points.front() == doctest::Approx(-4.0 + 4.0 / 128));
    CHECK_THROWS_AS(make_grids(ax, 4, 128, GridExtents{}), InputError);
    CHECK_THROWS_AS(make_grids(ax, 64, 64, GridExtents{1.0, 1.0, -4, 4}), InputError);

    const Grids r = refine(ax, a);
    CHECK(r.h.size() == 256);
    CHECK(r.n[0].spacing() == doctest::Approx(a.n[0].spacing() / 2));
}

TEST_CASE("sampling") {
    const auto ax = make_axb_model();
    const Grids grids = make_grids(ax, 64, 64, GridExtents{});
    const SampledFunction g = sample(gaussian_spec({0.7}, 0.4), grids, ax);

    Eigen::Index row = 0;
    Eigen::Index col = 0;
    g.values.cwiseAbs().maxCoeff(&row, &col);
    CHECK(std::abs(grids.n[0].points[static_cast<std::size_t>(row)]) <= grids.n[0].spacing() / 2);
    CHECK(std::abs(grids.h.points[static_cast<std::size_t>(col)]) <= grids.h.spacing() / 2);
    CHECK(g.truncation_mass < 1e-12);

    const SampledFunction a = sample(random_spec(ax, 9), grids, ax);
    const SampledFunction b = sample(random_spec(ax, 9), grids, ax);
    CHECK(a.values == b.values);
    CHECK(checksum(a) == checksum(b));
    CHECK(checksum(a) != checksum(sample(random_spec(ax, 10), grids, ax)));
}

TEST_CASE("frozen seed 42 fixtures") {
    for (const auto& m : {make_axb_model(), make_heisenberg_model()}) {
        const Grids grids = make_grids(m, m.dim_N == 1 ? 128 : 64, 128, GridExtents{});
        const SampledFunction g = sample(random_spec(m, 42), grids, m);
        const std::uint64_t want = m.dim_N == 1 ? 0xc961073c7c6cdcefULL : 0x974516aa3bd9726cULL;
        CHECK(checksum(g) == want);
        CHECK(lp_norm_G(g, 2) == doctest::Approx(m.dim_N == 1 ? 1.1136715164151203 : 1.2860114450507605).epsilon(1e-14));
    }
}

TEST_CASE("norm of a single cell") {
    const auto ax = make_axb_model();
    const Grids grids = make_grids(ax, 32, 32, GridExtents{});
    SampledFunction g{ax, grids, Eigen::MatrixXcd::Zero(32, 32), 0.0};
    g.values(5, 20) = 1.0;
    const double a = std::exp(grids.h.points[20]);
    for (double p : {1.0, 1.5, 2.0}) {
        const double want = std::pow(grids.n[0].weights[5] * modular(ax, a) * grids.h.weights[20], 1.0 / p);
        CHECK(testing::rel(lp_norm_G(g, p), want) <= 1e-14);
    }
}

TEST_CASE("Gaussian norms against closed forms") {
    SUBCASE("Heisenberg L2 on a 64^3 grid") {
        const auto he = make_heisenberg_model();
        const Grids grids = make_grids(he, 64, 64, GridExtents{});
        const SampledFunction g = sample(gaussian_spec({0.8, 0.6}, 0.5, {0.0, 1.0}), grids, he);
        const double want = std::sqrt(std::pow(pi, 1.5) * 0.8 * 0.6 * 0.5);
        CHECK(testing::rel(lp_norm_G(g, 2), want) <= 1e-6);
    }
    SUBCASE("ax+b with refinement") {
        const auto ax = make_axb_model();
        const Grids grids = make_grids(ax, 64, 64, GridExtents{});
        for (double p : {1.2, 1.5, 2.0}) {
            const double exact = axb_gaussian_lp(0.7, 0.4, p);
            const double coarse = lp_norm_G(sample(gaussian_spec({0.7}, 0.4), grids, ax), p);
            const double fine = lp_norm_G(sample(gaussian_spec({0.7}, 0.4), refine(ax, grids), ax), p);
            const double err = std::abs(coarse - exact) / exact;
            CHECK(err <= 1e-8);
            CHECK(std::abs(coarse - fine) / exact <= 4 * err + 1e-14);
        }
    }
}

TEST_CASE("property: homogeneity and triangle inequality") {
    std::mt19937_64 rng(21);
    for (const auto& m : {make_axb_model(), make_heisenberg_model()}) {
        const Grids grids = make_grids(m, m.dim_N == 1 ? 64 : 16, 32, GridExtents{});
        for (int i = 0; i < 10; ++i) {
            const SampledFunction f = sample(random_spec(m, rng()), grids, m);
            SampledFunction g = sample(random_spec(m, rng()), grids, m);
            const Complex c(testing::between(rng, -3, 3), testing::between(rng, -3, 3));
            SampledFunction sum = f;
            sum.values += g.values;
            for (double p : {1.0, 1.3, 1.5, 2.0}) {
                CHECK(testing::rel(lp_norm_G(scaled(f, c), p), std::abs(c) * lp_norm_G(f, p)) <= 1e-12);
                CHECK(lp_norm_G(sum, p) <= (lp_norm_G(f, p) + lp_norm_G(g, p)) * (1 + 1e-10));
            }
        }
    }
}

TEST_CASE("property: p-norm powers of a small bump are monotone and log-convex") {
    const auto ax = make_axb_model();
    const Grids grids = make_grids(ax, 64, 64, GridExtents{});
    TestFunctionSpec spec = gaussian_spec({0.3}, 0.3);
    spec.kind = TestFunctionKind::bump;
    const SampledFunction g = sample(spec, grids, ax);
    REQUIRE(g.values.cwiseAbs().maxCoeff() <= 1.0);
    std::vector<double> logs;
    for (int k = 0; k <= 20; ++k) {
        const double p = 1.0 + k / 20.0;
        logs.push_back(p * std::log(lp_norm_G(g, p)));
    }
    for (std::size_t k = 1; k < logs.size(); ++k) {
        CHECK(logs[k] <= logs[k - 1] + 1e-12);
    }
    for (std::size_t k = 1; k + 1 < logs.size(); ++k) {
        CHECK(logs[k] <= 0.5 * (logs[k - 1] + logs[k + 1]) + 1e-12);
    }
}

TEST_CASE("array file round trip") {
    const auto he = make_heisenberg_model();
    const Grids grids = make_grids(he, 16, 8, GridExtents{});
    const SampledFunction g = sample(random_spec(he, 5), grids, he);
    const ArrayFile a = to_array_file(g, 5);
    CHECK(a.dims == std::vector<std::size_t>{16, 16, 8, 2});
    const auto path = std::filesystem::temp_directory_path() / "hyw_roundtrip.hyw";
    write_array_file(path, a);
    const ArrayFile b = read_array_file(path);
    std::filesystem::remove(path);
    CHECK(b.dims == a.dims);
    CHECK(b.extents == a.extents);
    CHECK(b.seed == 5);
    CHECK(b.data == a.data);
    CHECK_THROWS_AS(read_array_file(path), InputError);
}

TEST_CASE("invalid specs are rejected") {
    const auto ax = make_axb_model();
    const Grids grids = make_grids(ax, 16, 16, GridExtents{});
    CHECK_THROWS_AS(sample(gaussian_spec({-1.0}, 0.4), grids, ax), InputError);
    CHECK_THROWS_AS(sample(gaussian_spec({1.0, 1.0}, 0.4), grids, ax), InputError);
    CHECK_THROWS_AS(lp_norm_G(sample(gaussian_spec({1.0}, 0.4), grids, ax), 0.5), InputError);
}
