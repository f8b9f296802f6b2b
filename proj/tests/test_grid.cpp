#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "hkit/errors.hpp"
#include "hkit/grid.hpp"

using namespace hkit;

namespace {
const double kSqrtPi = 1.7724538509055159;

std::string temp_path(const char* name) {
    return std::string("hkit_test_") + name + ".csv";
}
} // namespace

TEST_CASE("grid layout and indexing") {
    GridFunction g(Box::cube(2, -1.0, 1.0), {4, 8});
    CHECK(g.size() == 32);
    CHECK(g.spacing(0) == doctest::Approx(0.5));
    CHECK(g.spacing(1) == doctest::Approx(0.25));
    CHECK(g.cell_volume() == doctest::Approx(0.125));

    int multi[2];
    g.unflatten(9, multi); // axis 0 slowest: 9 = 1 * 8 + 1
    CHECK(multi[0] == 1);
    CHECK(multi[1] == 1);
    CHECK(g.flatten(multi) == 9);

    double x[2];
    g.point(9, x);
    CHECK(x[0] == doctest::Approx(-1.0 + 1.5 * 0.5));
    CHECK(x[1] == doctest::Approx(-1.0 + 1.5 * 0.25));
}

TEST_CASE("resolutions must be powers of two") {
    CHECK_THROWS_AS(GridFunction(Box::cube(1, 0.0, 1.0), {3}), NonPowerOfTwo);
    CHECK_THROWS_AS(GridFunction(Box::cube(2, 0.0, 1.0), {4, 6}), NonPowerOfTwo);
    CHECK_THROWS_AS(GridFunction(Box::cube(1, 0.0, 1.0), {0}), NonPowerOfTwo);
    CHECK_NOTHROW(GridFunction(Box::cube(2, 0.0, 1.0), {1, 64}));
}

TEST_CASE("sampling the analytic families") {
    // constant zero stays zero
    const auto zero = sample(FunctionSpec::constant(2, 0.0), Box::cube(2, -1.0, 1.0), {8, 8});
    CHECK(zero.max_abs() == 0.0);

    // gaussian peaks at the cell center nearest its center
    const auto g = sample(FunctionSpec::gaussian({0.0, 0.0}, 1.0), Box::cube(2, -2.0, 2.0), {64, 64});
    double peak = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) peak = std::max(peak, g[i]);
    const double h = g.spacing(0);
    // nearest center sits at distance h/2 per axis
    CHECK(peak == doctest::Approx(std::exp(-2.0 * (h / 2.0) * (h / 2.0))).epsilon(1e-12));

    // indicator of (0,1) on [-2,2]: the Riemann sum hits the measure exactly
    // when no cell straddles the edges
    const auto ind = sample(FunctionSpec::indicator(Box::cube(1, 0.0, 1.0)), Box::cube(1, -2.0, 2.0), {256});
    CHECK(ind.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ind.l1_norm() == doctest::Approx(1.0).epsilon(1e-12));

    // integral of e^{-x^2} over a wide box
    const auto e = sample(FunctionSpec::gaussian({0.0}, 1.0), Box::cube(1, -8.0, 8.0), {1024});
    CHECK(e.integral() == doctest::Approx(kSqrtPi).epsilon(1e-3));
    CHECK(e.l1_norm() == doctest::Approx(kSqrtPi).epsilon(1e-3));
}

TEST_CASE("interpolation is exact at nodes, linear between, zero outside") {
    GridFunction g(Box::cube(1, 0.0, 1.0), {4});
    g[0] = 1.0;
    g[1] = 3.0;
    g[2] = 2.0;
    g[3] = 5.0;

    double x = 0.125; // first cell center
    CHECK(g.eval_interp({&x, 1}) == doctest::Approx(1.0));
    x = 0.25; // midpoint of the first two centers
    CHECK(g.eval_interp({&x, 1}) == doctest::Approx(2.0));
    x = -0.5;
    CHECK(g.eval_interp({&x, 1}) == 0.0);
    x = 1.5;
    CHECK(g.eval_interp({&x, 1}) == 0.0);

    // 2-d: interpolating a linear function reproduces it in the interior
    GridFunction p(Box::cube(2, 0.0, 1.0), {16, 16});
    for (std::int64_t i = 0; i < p.size(); ++i) {
        double xy[2];
        p.point(i, xy);
        p[i] = 2.0 * xy[0] - 3.0 * xy[1] + 0.25;
    }
    const double probe[] = {0.4321, 0.6789};
    CHECK(p.eval_interp(probe) == doctest::Approx(2.0 * probe[0] - 3.0 * probe[1] + 0.25).epsilon(1e-12));
}

TEST_CASE("norms and arithmetic") {
    GridFunction g(Box::cube(1, 0.0, 1.0), {4}, {1.0, -2.0, 3.0, -4.0});
    CHECK(g.l1_norm() == doctest::Approx(10.0 * 0.25));
    CHECK(g.l2_norm() == doctest::Approx(std::sqrt(30.0 * 0.25)));
    CHECK(g.integral() == doctest::Approx(-2.0 * 0.25));
    CHECK(g.mean_value() == doctest::Approx(-0.5));
    CHECK(g.max_abs() == 4.0);

    const auto sum = g + g.scaled(-1.0);
    CHECK(sum.max_abs() == 0.0);
    const auto diff = g - g.scaled(2.0);
    CHECK(diff.max_abs() == doctest::Approx(4.0));

    GridFunction other(Box::cube(1, 0.0, 2.0), {4});
    CHECK_THROWS_AS(g + other, InvalidArgument);
    GridFunction finer(Box::cube(1, 0.0, 1.0), {8});
    CHECK_THROWS_AS(g - finer, InvalidArgument);
}

TEST_CASE("csv round trip preserves every bit") {
    const auto g = sample(FunctionSpec::gaussian({0.1, -0.2}, 0.7, 1.3), Box::cube(2, -2.0, 2.0), {16, 8});
    const std::string path = temp_path("roundtrip");
    g.save_csv(path);
    const auto back = GridFunction::load_csv(path);
    CHECK(back.dim() == 2);
    CHECK(back.resolution() == g.resolution());
    CHECK(back.box().lo[0] == g.box().lo[0]);
    CHECK(back.box().hi[1] == g.box().hi[1]);
    REQUIRE(back.size() == g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) CHECK(back[i] == g[i]);
    std::remove(path.c_str());
}

TEST_CASE("csv loader rejects malformed input") {
    const std::string path = temp_path("malformed");
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("dim,2\nbox,0,1\n", f); // wrong box arity, missing sections
        std::fclose(f);
    }
    CHECK_THROWS_AS(GridFunction::load_csv(path), Error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(GridFunction::load_csv("does_not_exist_anywhere.csv"), Error);
}

TEST_CASE("function spec validation") {
    CHECK_THROWS_AS(FunctionSpec::gaussian({0.0}, 0.0), ConfigInvalid);
    CHECK_THROWS_AS(FunctionSpec::atom_profile({0.0}, -1.0, AtomShape::SignSplit), ConfigInvalid);
    CHECK_THROWS_AS(FunctionSpec::poly_bump({0.0, 0.0}, 1.0, {1}), ConfigInvalid);
}

TEST_CASE("atom profiles have vanishing continuum mean") {
    // sign-split: odd in x1 about the center, cancellation is exact on a
    // grid symmetric about the center
    const auto a = sample(FunctionSpec::atom_profile({0.0, 0.0}, 0.8, AtomShape::SignSplit),
                          Box::cube(2, -1.0, 1.0), {64, 64});
    CHECK(std::abs(a.integral()) < 1e-15);

    // shell-difference balances inner mass against the shell in the continuum
    const auto s = sample(FunctionSpec::atom_profile({0.0}, 0.8, AtomShape::ShellDifference),
                          Box::cube(1, -1.0, 1.0), {1024});
    CHECK(std::abs(s.integral()) < 1e-3);
}
