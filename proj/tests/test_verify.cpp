#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyw/error.hpp"
#include "hyw/verify.hpp"
#include "support.hpp"

using namespace hyw;

namespace {

constexpr double pi = std::numbers::pi;

// ||ghat||_4 / ||g||_{4/3} for a 1-D Gaussian of width s, by direct sums on fine grids.
double gaussian_hy_ratio(double s) {
    const double p = 4.0 / 3.0;
    const Grid1D x = Grid1D::midpoint(-12.0 * s, 12.0 * s, 1200);
    const Grid1D w = Grid1D::midpoint(-3.0 / s, 3.0 / s, 1200);
    double gp = 0.0;
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = std::exp(-x.points[i] * x.points[i] / (2 * s * s));
        gp += std::pow(g[i], p) * x.weights[i];
    }
    double fq = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += g[i] * std::polar(x.weights[i], -2 * pi * w.points[k] * x.points[i]);
        }
        fq += std::pow(std::abs(acc), 4.0) * w.weights[k];
    }
    return std::pow(fq, 0.25) / std::pow(gp, 1.0 / p);
}

VerifyOptions quick_heisenberg() {
    VerifyOptions o;
    o.lambda_points = 16;
    o.refinement = false;
    return o;
}

}  // namespace

TEST_CASE("Babenko constant") {
    CHECK(babenko_constant(2.0, 1).value == 1.0);
    CHECK(babenko_constant(2.0, 3).value == doctest::Approx(1.0).epsilon(1e-15));
    const double a1 = babenko_constant(4.0 / 3.0, 1).value;
    CHECK(a1 == doctest::Approx(0.9367).epsilon(1e-4));
    CHECK(babenko_constant(4.0 / 3.0, 2).value == doctest::Approx(a1 * a1).epsilon(1e-15));
    CHECK(babenko_constant(1.5, 2, ConstantRegime::classical).value == 1.0);
    CHECK_THROWS_AS(babenko_constant(1.0, 1), InputError);
    CHECK_THROWS_AS(babenko_constant(2.5, 1), InputError);

    double best = 0.0;
    for (double s : {0.3, 0.5, 0.8, 1.2}) {
        const double r = gaussian_hy_ratio(s);
        CHECK(r <= a1 * (1 + 1e-9));
        best = std::max(best, r);
    }
    CHECK(std::abs(best - a1) <= 1e-6);
}

TEST_CASE("finalize and canonical order") {
    CheckResult a;
    a.kind = CheckKind::inequality;
    a.lhs = 1.0;
    a.rhs = 2.0;
    a.tolerance = 1e-6;
    finalize(a);
    CHECK(a.pass);
    CHECK(a.margin == 1.0);
    CheckResult b = a;
    b.kind = CheckKind::equality;
    b.tolerance = 1e-2;
    finalize(b);
    CHECK_FALSE(b.pass);
    CHECK(b.margin == doctest::Approx(0.5));
    b.lhs = 2.0;
    b.rhs = 0.0;
    b.kind = CheckKind::inequality;
    finalize(b);
    CHECK_FALSE(b.pass);

    std::vector<CheckResult> v(4, a);
    v[0].name = "russo";
    v[1].name = "plancherel";
    v[1].p = 2.0;
    v[2].name = "plancherel";
    v[2].p = 1.5;
    v[2].label = "z";
    v[3].name = "plancherel";
    v[3].p = 1.5;
    v[3].label = "a";
    sort_canonical(v);
    CHECK(v[0].label == "a");
    CHECK(v[1].label == "z");
    CHECK(v[2].p == 2.0);
    CHECK(v[3].name == "russo");
}

TEST_CASE("fixtures") {
    const auto ax = make_axb_model();
    const auto f = standard_fixtures(ax, 4, 100);
    REQUIRE(f.size() == 4);
    CHECK(f[0].label == "gaussian");
    CHECK(f[3].label == "random-103");
    for (const auto& m : {make_axb_model(), make_heisenberg_model()}) {
        for (const Fixture& x : standard_fixtures(m, 5, 3)) {
            const SampledFunction g = sample(x.spec, fixture_grids(m, m.dim_N == 1 ? 128 : 64, 128), m);
            CHECK(g.truncation_mass < 1e-8);
        }
    }
}

TEST_CASE("Plancherel on the ax+b Gaussian") {
    const auto ax = make_axb_model();
    const Fixture fx{"gaussian", gaussian_fixture(ax)};
    const CheckResult r = check_plancherel(fx, ax, fixture_grids(ax, 128, 128), VerifyOptions{});
    CHECK(r.pass);
    CHECK(r.margin <= 1e-2);
    CHECK(r.extra_value("relative_error_refined") < r.extra_value("relative_error"));
    CHECK(r.extra_value("truncation_mass") < 1e-8);
}

TEST_CASE("Plancherel on the Heisenberg Gaussian") {
    const auto he = make_heisenberg_model();
    const Fixture fx{"gaussian", gaussian_fixture(he)};
    VerifyOptions o = quick_heisenberg();
    o.lambda_points = 32;
    const CheckResult r = check_plancherel(fx, he, fixture_grids(he, 32, 64), o);
    CHECK(r.pass);
    CHECK(r.margin <= 1e-2);
}

TEST_CASE("Hausdorff-Young records") {
    const auto ax = make_axb_model();
    const SampledFunction g = sample(gaussian_fixture(ax), fixture_grids(ax, 128, 128), ax);
    const std::vector<double> ps{1.5, 2.0};
    const auto rs = check_hausdorff_young(g, "gaussian", ps, VerifyOptions{});
    REQUIRE(rs.size() == 2);
    // Regression value of the margin at p = 1.5 on the default desk grid.
    CHECK(rs[0].pass);
    CHECK(rs[0].margin == doctest::Approx(0.058786685395945559).epsilon(1e-9));
    CHECK(rs[1].rhs == doctest::Approx(lp_norm_G(g, 2.0)).epsilon(1e-14));
    CHECK(std::abs(rs[1].lhs - rs[1].rhs) <= 1e-2 * rs[1].rhs);

    SampledFunction zero = g;
    zero.values.setZero();
    const auto z = check_hausdorff_young(zero, "zero", ps, VerifyOptions{});
    CHECK(z[0].lhs == 0.0);
    CHECK(z[0].rhs == 0.0);
    CHECK(z[0].pass);

    const auto again = check_hausdorff_young(g, "gaussian", ps, VerifyOptions{});
    CHECK(again[0].lhs == rs[0].lhs);
}

TEST_CASE("proof chain") {
    for (const char* name : {"axb", "heisenberg"}) {
        const auto m = model_by_name(name);
        const VerifyOptions o = m.dim_N == 1 ? VerifyOptions{} : quick_heisenberg();
        const Grids grids = fixture_grids(m, m.dim_N == 1 ? 128 : 32, m.dim_N == 1 ? 128 : 64);
        for (const Fixture& fx : standard_fixtures(m, 3, 11)) {
            const SampledFunction g = sample(fx.spec, grids, m);
            const ProofChain c = proof_chain(g, 1.5, o);
            CHECK(c.schatten <= c.russo * (1 + 1e-10));
            CHECK(c.russo <= c.cauchy_schwarz * (1 + 1e-10));
            CHECK(c.cauchy_schwarz <= c.minkowski * (1 + 1e-10));
            CHECK(std::abs(c.minkowski - c.slices) <= 1e-8 * c.slices);
            CHECK(c.slices <= c.bound * (1 + 1e-6));
            CHECK(c.worst_russo_ratio <= 1 + 1e-10);
            CHECK(c.worst_slice_ratio <= 1 + 1e-10);
            for (const CheckResult& r : check_proof_chain(g, fx.label, 1.5, o)) {
                CHECK(r.pass);
            }
            const ProofChain c2 = proof_chain(g, 2.0, o);
            for (double v : {c2.schatten, c2.russo, c2.cauchy_schwarz, c2.minkowski, c2.slices}) {
                CHECK(std::abs(v - c2.bound) <= 1e-2 * c2.bound);
            }
            for (const CheckResult& r : check_proof_chain(g, fx.label, 2.0, o)) {
                CHECK(r.pass);
            }
        }
    }
}

TEST_CASE("semi-invariance") {
    const auto ax = make_axb_model();
    const auto he = make_heisenberg_model();
    const Grid1D grid = Grid1D::lattice(-48, 96, 1.0 / 16);
    CHECK(semi_invariance_deviation(ax, {1.0}, identity(ax), grid) == 0.0);
    CHECK(semi_invariance_deviation(ax, {-1.0}, {{0.7}, std::exp(5.0 / 16)}, grid) <= 1e-10);
    CHECK(semi_invariance_deviation(he, {0.0, 0.8}, {{0.3, -1.1}, -7.0 / 16}, grid) <= 1e-10);
    CHECK(check_semi_invariance(ax, make_axb_dual(), 20, 5, VerifyOptions{}).pass);
    CHECK(check_semi_invariance(he, make_heisenberg_dual(), 20, 5, VerifyOptions{}).pass);
}

TEST_CASE("dual measure scaling") {
    const auto ax = make_axb_model();
    const auto he = make_heisenberg_model();
    const ParamBox interval{{0.5}, {2.0}};
    CHECK(image_measure(ax, 1.0, interval) == doctest::Approx(1.5));
    CHECK(image_measure(ax, 4.0, interval) == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
    CHECK(image_measure(ax, 4.0, interval) == doctest::Approx(modular(ax, 4.0) * 1.5).epsilon(1e-15));
    const ParamBox box{{-1.0, 0.5}, {2.0, 1.5}};
    CHECK(image_measure(he, 0.0, box) == doctest::Approx(3.0));
    CHECK(image_measure(he, 2.7, box) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(check_dual_measure_scaling(ax, 100, 7, VerifyOptions{}).pass);
    CHECK(check_dual_measure_scaling(he, 100, 7, VerifyOptions{}).pass);
}

TEST_CASE("Minkowski sides") {
    std::mt19937_64 rng(61);
    const double p = 1.5;
    const double q = 3.0;
    Eigen::VectorXd f(6);
    Eigen::VectorXd g(9);
    for (Eigen::Index i = 0; i < 6; ++i) {
        f[i] = testing::between(rng, 0.1, 2.0);
    }
    for (Eigen::Index j = 0; j < 9; ++j) {
        g[j] = testing::between(rng, 0.1, 2.0);
    }
    std::vector<double> wx(6);
    std::vector<double> wg(9);
    for (double& w : wx) {
        w = testing::between(rng, 0.1, 1.0);
    }
    for (double& w : wg) {
        w = testing::between(rng, 0.1, 1.0);
    }
    const auto [l, r] = minkowski_sides(f * g.transpose(), wx, wg, p, q);
    CHECK(std::abs(l - r) <= 1e-10 * r);
    const auto [l1, r1] = minkowski_sides(f.transpose(), std::span(wx).first(1), wx, p, q);
    CHECK(std::abs(l1 - r1) <= 1e-10 * r1);
    const auto [l2, r2] = minkowski_sides(g, wg, std::span(wx).first(1), p, q);
    CHECK(std::abs(l2 - r2) <= 1e-10 * r2);

    const CheckResult c = check_minkowski(500, 1.5, 3, VerifyOptions{});
    CHECK(c.pass);
    CHECK(c.extra_value("instances") == 500);
    CHECK(c.extra_value("violations") == 0);
    CHECK(c.lhs <= 1.0 + 1e-10);
    const CheckResult rr = check_russo(200, 1.5, 3, VerifyOptions{});
    CHECK(rr.pass);
}

TEST_CASE("nilpotent bound") {
    const auto he = make_heisenberg_model();
    CHECK(nilpotent_exponent(he) == 2.0);
    CHECK_THROWS_AS(nilpotent_exponent(make_axb_model()), InputError);
    const SampledFunction g = sample(gaussian_fixture(he), fixture_grids(he, 32, 64), he);
    const CheckResult r2 = check_nilpotent_bound(g, "gaussian", 2.0, quick_heisenberg());
    CHECK(r2.rhs == doctest::Approx(lp_norm_G(g, 2.0)).epsilon(1e-14));
    const CheckResult r = check_nilpotent_bound(g, "gaussian", 1.5, quick_heisenberg());
    CHECK(r.pass);
    CHECK(r.extra_value("exponent") == 2.0);
    CHECK(r.rhs == doctest::Approx(std::pow(babenko_constant(1.5, 1).value, 2) * lp_norm_G(g, 1.5)).epsilon(1e-14));
}

TEST_CASE("Gaussian slices are near extremal") {
    for (const auto& m : {make_axb_model(), make_heisenberg_model()}) {
        const SampledFunction g = sample(gaussian_fixture(m), fixture_grids(m, m.dim_N == 1 ? 128 : 64, 32), m);
        for (double p : {1.2, 1.5, 1.8}) {
            const double a = babenko_constant(p, m.dim_N).value;
            const auto [lo, hi] = slice_ratio_range(g, p);
            CHECK(lo >= 0.99 * a);
            CHECK(hi <= a * (1 + 1e-9));
            CHECK(check_gaussian_extremality(g, "gaussian", p, VerifyOptions{}).pass);
        }
    }
}
