#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hkit/errors.hpp"
#include "hkit/fft.hpp"
#include "hkit/hardy.hpp"
#include "hkit/numeric.hpp"
#include "hkit/operator.hpp"
#include "oracles.hpp"

using namespace hkit;

namespace {
const double kPi = std::numbers::pi;

GridFunction sampled(const std::function<double(std::span<const double>)>& f, const Box& box,
                     std::vector<int> res) {
    GridFunction g(box, std::move(res));
    std::vector<double> x(static_cast<std::size_t>(box.dim()));
    for (std::int64_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        g[i] = f(x);
    }
    return g;
}
} // namespace

TEST_CASE("ball volume") {
    CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ball_volume(2, 1.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(ball_volume(2, 0.5) == doctest::Approx(kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("atoms satisfy the defining constraints") {
    // 1-d sign-split atom of radius 1: |B| = 2, sup bound 1/2
    Atom a1{1, {0.0}, 1.0, AtomShape::SignSplit};
    const auto g1 = make_atom(a1, Box::cube(1, -2.0, 2.0), {256});
    CHECK(g1.max_abs() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(g1.integral()) < 1e-15);
    const auto rep1 = check_atom(g1, a1.center, a1.radius, 1e-6);
    CHECK(rep1.pass);
    CHECK(rep1.name == "atom-check");

    // 2-d atom of radius 1: sup bound 1/pi
    Atom a2{2, {0.25, -0.25}, 1.0, AtomShape::SignSplit};
    const auto g2 = make_atom(a2, Box::cube(2, -2.0, 2.0), {128, 128});
    CHECK(g2.max_abs() <= 1.0 / kPi + 1e-12);
    CHECK(g2.max_abs() > 0.9 / kPi);
    CHECK(std::abs(g2.integral()) < 1e-15);
    CHECK(check_atom(g2, a2.center, a2.radius, 1e-6).pass);

    // shell-difference atom balances by construction
    Atom sh{2, {0.0, 0.0}, 1.0, AtomShape::ShellDifference};
    const auto gs = make_atom(sh, Box::cube(2, -2.0, 2.0), {128, 128});
    CHECK(std::abs(gs.integral()) < 1e-15);
    CHECK(check_atom(gs, sh.center, sh.radius, 1e-6).pass);

    // ball must fit in the box
    Atom outside{1, {3.0}, 1.0, AtomShape::SignSplit};
    CHECK_THROWS_AS(make_atom(outside, Box::cube(1, -2.0, 2.0), {64}), BallOutsideBox);
}

TEST_CASE("atom checker flags each violated constraint") {
    // constant on the ball: mean is far from zero
    const Atom spec{1, {0.0}, 1.0, AtomShape::SignSplit};
    auto flat = sample(FunctionSpec::indicator(Box::cube(1, -1.0, 1.0), 0.5), Box::cube(1, -2.0, 2.0), {256});
    auto rep = check_atom(flat, spec.center, spec.radius, 1e-6);
    CHECK(!rep.pass);
    CHECK(rep.diagnostic("mean_pass") == 0.0);
    CHECK(rep.diagnostic("leak_pass") == 1.0);

    // doubling a valid atom breaks the sup bound but not the mean
    const auto good = make_atom(spec, Box::cube(1, -2.0, 2.0), {256});
    rep = check_atom(good.scaled(2.0), spec.center, spec.radius, 1e-6);
    CHECK(!rep.pass);
    CHECK(rep.diagnostic("sup_pass") == 0.0);
    CHECK(rep.diagnostic("mean_pass") == 1.0);

    // support leakage: shift the window so mass sits outside the claimed ball
    rep = check_atom(good, std::vector<double>{1.5}, 0.5, 1e-6);
    CHECK(!rep.pass);
    CHECK(rep.diagnostic("leak_pass") == 0.0);
}

TEST_CASE("transforming an atom by the identity changes nothing") {
    const Atom spec{2, {0.0, 0.0}, 1.0, AtomShape::SignSplit};
    const Box box = Box::cube(2, -1.3, 1.3);
    const auto g = make_atom(spec, box, {128, 128});
    const auto t = transform_atom(g, SquareMatrix::identity(2), box, {128, 128});
    CHECK((t - g).max_abs() < 1e-12);
}

TEST_CASE("dilation rescales an atom into an atom") {
    // n = 1, M = (2): l1 = 4, image ball radius r/2, values scale by 2
    const Atom spec{1, {0.0}, 1.0, AtomShape::SignSplit};
    const auto g = make_atom(spec, Box::cube(1, -1.5, 1.5), {512});
    const SquareMatrix m(1, {2.0});
    const auto t = transform_atom(g, spec, m);
    CHECK(t.l1 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(t.radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.center[0] == doctest::Approx(0.0));
    CHECK(t.value.max_abs() == doctest::Approx(2.0 * g.max_abs()).epsilon(1e-9));
    // the result passes the atom check at its own tolerance
    const double h = t.value.spacing(0);
    const double tol = atom_check_tolerance(spec.profile, 1, t.radius, h);
    CHECK(check_atom(t.value, t.center, t.radius, tol).pass);
}

TEST_CASE("rotations leave radius and sup alone") {
    const Atom spec{2, {0.0, 0.0}, 0.8, AtomShape::ShellDifference};
    const auto g = make_atom(spec, Box::cube(2, -1.0, 1.0), {256, 256});
    const auto t = transform_atom(g, spec, SquareMatrix::rotation2(0.6));
    CHECK(t.l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.radius == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(t.value.max_abs() <= g.max_abs() * (1.0 + 1e-9));
    const double w = std::sqrt(2.0) * (t.value.spacing(0) + g.spacing(0));
    const double tol = 2.0 * atom_profile_constant(spec.profile, 2) * w / t.radius;
    CHECK(check_atom(t.value, t.center, t.radius, tol).pass);
}

TEST_CASE("shear transform pushes the atom into the predicted ellipsoid bound") {
    const Atom spec{2, {0.1, 0.0}, 0.5, AtomShape::SignSplit};
    const auto g = make_atom(spec, Box::cube(2, -1.0, 1.0), {256, 256});
    const SquareMatrix m(2, {1.0, 1.0, 0.0, 1.0});
    const auto t = transform_atom(g, spec, m);
    const double golden_low = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(t.l1 == doctest::Approx(golden_low).epsilon(1e-12));
    CHECK(t.radius == doctest::Approx(0.5 / std::sqrt(golden_low)).epsilon(1e-12));
    const double w = std::sqrt(2.0) * (t.value.spacing(0) + g.spacing(0) * spectral_norm(inverse(m)));
    const double tol = 2.0 * atom_profile_constant(spec.profile, 2) * w / t.radius;
    CHECK(check_atom(t.value, t.center, t.radius, tol).pass);

    // explicit-box variant rejects boxes that cannot hold the image ball
    CHECK_THROWS_AS(transform_atom(g, spec, m, Box::cube(2, -0.4, 0.4), {64, 64}), BallOutsideBox);

    CHECK_THROWS_AS(transform_atom(g, spec, SquareMatrix(2, {1.0, 1.0, 1.0, 1.0})), SingularMatrix);
}

TEST_CASE("ellipsoid containment bound is sharp") {
    auto rep = verify_ellipsoid_containment(SquareMatrix::identity(2), 1.0, 4000);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.diagnostic("violations") == 0.0);

    const double d[] = {2.0, 3.0};
    rep = verify_ellipsoid_containment(SquareMatrix::diagonal(d), 1.0, 4000);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(0.5).epsilon(1e-12)); // r / sqrt(l1), l1 = 4
    CHECK(rep.ratio > 0.99);

    const SquareMatrix sh(2, {1.0, 1.0, 0.0, 1.0});
    rep = verify_ellipsoid_containment(sh, 1.0, 4000);
    CHECK(rep.pass);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(rep.rhs == doctest::Approx(golden).epsilon(1e-6));

    // deterministic in the seed
    const auto again = verify_ellipsoid_containment(sh, 1.0, 4000);
    CHECK(again.lhs == rep.lhs);
}

TEST_CASE("fft round trip and a known transform") {
    std::vector<std::complex<double>> v = {{1, 0}, {2, 0}, {3, 0}, {4, 0}};
    auto w = v;
    fft_1d(w, false);
    CHECK(w[0].real() == doctest::Approx(10.0));
    CHECK(w[2].real() == doctest::Approx(-2.0));
    CHECK(w[1] == std::complex<double>(-2.0, 2.0));
    fft_1d(w, true);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(w[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]) < 1e-13);

    std::vector<std::complex<double>> bad(3);
    CHECK_THROWS_AS(fft_1d(bad, false), NonPowerOfTwo);
}

TEST_CASE("riesz multiplier lattice invariants") {
    SpectralGrid s(Box::cube(2, -1.0, 1.0), {8, 8});
    CHECK(s.frequency(0, 0) == 0.0);
    CHECK(s.frequency(0, 1) == doctest::Approx(0.5));  // 1 / L, L = 2
    CHECK(s.frequency(0, 7) == doctest::Approx(-0.5)); // wrapped to -1 / L
    CHECK(s.nyquist_or_zero(0, 0));
    CHECK(s.nyquist_or_zero(0, 4));
    CHECK(!s.nyquist_or_zero(0, 3));

    double sq = 0.0;
    const int k[] = {3, 5};
    for (int p = 1; p <= 2; ++p) {
        const auto m = s.multiplier(p, k);
        CHECK(std::abs(m) <= 1.0 + 1e-15);
        sq += std::norm(m);
    }
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));

    const int zero[] = {0, 0};
    CHECK(std::abs(s.multiplier(1, zero)) == 0.0);
    // at a Nyquist index the multiplier is real; off it, purely imaginary
    const int nyq[] = {4, 1};
    CHECK(s.multiplier(1, nyq).imag() == 0.0);
    const int plain[] = {1, 2};
    CHECK(s.multiplier(1, plain).real() == 0.0);
}

TEST_CASE("riesz transform in one dimension is the hilbert transform") {
    // pure cosine mode -> sine: R_1 cos(2 pi x) = sin(2 pi x) on the unit torus
    const Box box = Box::cube(1, 0.0, 1.0);
    const auto cosf = sampled([](std::span<const double> x) { return std::cos(2.0 * kPi * x[0]); }, box, {64});
    const auto r = riesz_transform(cosf, 1);
    for (std::int64_t i = 0; i < r.size(); ++i) {
        double x;
        r.point(i, {&x, 1});
        CHECK(r[i] == doctest::Approx(std::sin(2.0 * kPi * x)).epsilon(1e-10));
    }

    // gaussian: compare against Dawson-series and principal-value oracles
    const auto g = sample(FunctionSpec::gaussian({0.0}, 1.0), Box::cube(1, -40.0, 40.0), {4096});
    const auto hg = riesz_transform(g, 1);
    for (double x0 : {0.5, 1.0, 2.0}) {
        const double expected = 2.0 / std::sqrt(kPi) * oracle::dawson(x0);
        const double pv = oracle::pv_hilbert_gaussian(x0);
        CHECK(expected == doctest::Approx(pv).epsilon(1e-6)); // oracle cross-agreement
        CHECK(hg.eval_interp({&x0, 1}) == doctest::Approx(expected).epsilon(2e-3));
    }
    CHECK(hg.eval_interp(std::vector<double>{1.0}) == doctest::Approx(0.6071577058413937).epsilon(2e-3));
}

TEST_CASE("riesz transform parity and parseval") {
    const Box box = Box::cube(2, -8.0, 8.0);
    const auto f = sample(FunctionSpec::gaussian({0.0, 0.0}, 1.0), box, {64, 64});
    const auto r1 = riesz_transform(f, 1);

    // R_1 of a radial function is odd in x1 and even in x2
    for (std::int64_t i = 0; i < r1.size(); ++i) {
        int m[2];
        r1.unflatten(i, m);
        int flip1[] = {63 - m[0], m[1]};
        CHECK(r1[i] == doctest::Approx(-r1[r1.flatten(flip1)]).epsilon(1e-10));
        int flip2[] = {m[0], 63 - m[1]};
        CHECK(r1[i] == doctest::Approx(r1[r1.flatten(flip2)]).epsilon(1e-10));
    }

    // sum of squares over p recovers the centered l2 norm
    const auto r2 = riesz_transform(f, 2);
    const auto centered = f - sample(FunctionSpec::constant(2, f.mean_value()), box, {64, 64});
    const double lhs = r1.l2_norm() * r1.l2_norm() + r2.l2_norm() * r2.l2_norm();
    const double rhs = centered.l2_norm() * centered.l2_norm();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(r1.l2_norm() <= f.l2_norm() * (1.0 + 1e-12));
}

TEST_CASE("riesz transform is linear and commutes with grid shifts") {
    const Box box = Box::cube(1, 0.0, 4.0);
    const auto a = sampled([](std::span<const double> x) { return std::exp(-std::pow(x[0] - 1.7, 2) * 3.0); },
                           box, {128});
    const auto b = sampled([](std::span<const double> x) { return std::cos(kPi * x[0] / 2.0); }, box, {128});
    const auto lin = riesz_transform(a.scaled(2.0) + b, 1) -
                     (riesz_transform(a, 1).scaled(2.0) + riesz_transform(b, 1));
    CHECK(lin.max_abs() < 1e-12);

    // circular shift by 32 cells commutes exactly with the transform
    auto shift = [](const GridFunction& f, int by) {
        GridFunction out = f;
        const int n = f.resolution()[0];
        for (int i = 0; i < n; ++i) out[(i + by) % n] = f[i];
        return out;
    };
    const auto lhs = riesz_transform(shift(a, 32), 1);
    const auto rhs = shift(riesz_transform(a, 1), 32);
    CHECK((lhs - rhs).max_abs() < 1e-11);
}

TEST_CASE("h1 surrogate basics") {
    const Box box = Box::cube(1, -12.0, 12.0);
    const Atom spec{1, {0.0}, 1.0, AtomShape::SignSplit};
    const auto atom = make_atom(spec, box, {1024});

    const auto rep = h1_surrogate(atom);
    CHECK(rep.terms.size() == 2);
    CHECK(rep.terms[0] == doctest::Approx(atom.l1_norm()).epsilon(1e-12));
    CHECK(rep.total == doctest::Approx(rep.terms[0] + rep.terms[1]).epsilon(1e-12));
    CHECK(std::abs(rep.mean) < 1e-12);
    CHECK(h1_surrogate_norm(atom) == doctest::Approx(rep.total).epsilon(1e-12));
    CHECK(rep.total >= atom.l1_norm());

    // absolute homogeneity
    CHECK(h1_surrogate_norm(atom.scaled(-3.0)) == doctest::Approx(3.0 * rep.total).epsilon(1e-12));

    // wraparound: the padded box changes the surrogate only slightly
    CHECK(wraparound_estimate(atom) < 0.05);
    const auto padded = embed_zero_padded(atom);
    CHECK(padded.resolution()[0] == 2048);
    CHECK(padded.box().length(0) == doctest::Approx(48.0));
    CHECK(padded.l1_norm() == doctest::Approx(atom.l1_norm()).epsilon(1e-12));
}

TEST_CASE("dilation invariance of the h1 surrogate") {
    const Box box = Box::cube(2, -10.0, 10.0);
    const Atom spec{2, {0.0, 0.0}, 1.0, AtomShape::SignSplit};
    const auto atom = make_atom(spec, box, {256, 256});

    // identity: exact
    auto rep = verify_dilation_h1(atom, SquareMatrix::identity(2));
    CHECK(rep.pass);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));

    // scalar dilation: cell centers of the scaled box land on scaled centers
    rep = verify_dilation_h1(atom, SquareMatrix::identity(2).scaled(2.0));
    CHECK(rep.pass);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.diagnostic("is_scalar_dilation") == 1.0);

    // rotation: l1 = 1, the surrogate should be nearly invariant
    rep = verify_dilation_h1(atom, SquareMatrix::rotation2(0.5));
    CHECK(rep.pass);
    CHECK(rep.ratio < 1.5);
}

TEST_CASE("h1 bound for the hausdorff operator") {
    const Box box = Box::cube(1, -16.0, 16.0);
    const Atom spec{1, {0.0}, 1.0, AtomShape::SignSplit};
    const auto atom = make_atom(spec, box, {1024});

    // identity-concentrated kernel: Hf ~ f so the ratio to the L2 norm is ~1
    KernelSpec phi = KernelSpec::gaussian({1.0}, 0.01, 1.0, 6.0);
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    phi.amplitude = 1.0 / kernel_abs_mass(phi, q).value;
    auto rep = verify_h1_bound(phi, MatrixFamily::scalar_dilation(1), atom, q);
    CHECK(rep.pass);
    CHECK(rep.name == "h1-bound");
    CHECK(rep.diagnostic("norm_l2") == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.02));

    // genuine averaging still satisfies the bound
    const KernelSpec wide = KernelSpec::indicator(Box::cube(1, 1.0, 2.0));
    rep = verify_h1_bound(wide, MatrixFamily::scalar_dilation(1), atom, q);
    CHECK(rep.pass);
    CHECK(rep.lhs <= rep.rhs * 10.0);
}
