#include <doctest.h>

#include <cmath>

#include "hkit/errors.hpp"
#include "hkit/matrix.hpp"
#include "hkit/numeric.hpp"
#include "oracles.hpp"

using namespace hkit;

namespace {
SquareMatrix random_matrix(SplitMix64& rng, int n, double lo = -1.0, double hi = 1.0) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}
} // namespace

TEST_CASE("ell norm") {
    CHECK(ell_norm(SquareMatrix::identity(3)) == 1.0);
    const double d[] = {2.0, -3.0};
    CHECK(ell_norm(SquareMatrix::diagonal(d)) == 3.0);
    CHECK(ell_norm(SquareMatrix(2, {1.0, 1.0, 0.0, 0.0})) == 1.0);
    CHECK(ell_norm(SquareMatrix(2)) == 0.0);
}

TEST_CASE("symmetric eigenvalues") {
    const double d[] = {4.0, 9.0};
    auto r = symmetric_eigenvalues(SquareMatrix::diagonal(d));
    CHECK(r.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx(9.0).epsilon(1e-12));

    r = symmetric_eigenvalues(SquareMatrix(2, {1.0, 1.0, 1.0, 2.0}));
    const double s5 = std::sqrt(5.0);
    CHECK(r.eigenvalues[0] == doctest::Approx((3.0 - s5) / 2.0).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx((3.0 + s5) / 2.0).epsilon(1e-12));

    r = symmetric_eigenvalues(SquareMatrix(2, {1.0, 1.0, 1.0, 1.0}));
    CHECK(r.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(symmetric_eigenvalues(SquareMatrix(2, {1.0, 1.0, 0.0, 0.0})), NotSymmetric);

    // trace identity on random symmetric matrices
    SplitMix64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 7);
        SquareMatrix m = random_matrix(rng, n);
        m = (m + m.transposed()).scaled(0.5);
        const auto er = symmetric_eigenvalues(m);
        double trace = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) trace += m(i, i);
        for (double ev : er.eigenvalues) sum += ev;
        CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
    }
}

TEST_CASE("spectral norm") {
    CHECK(spectral_norm(SquareMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
    const double d[] = {2.0, -3.0};
    CHECK(spectral_norm(SquareMatrix::diagonal(d)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(spectral_norm(SquareMatrix(2, {1.0, 1.0, 0.0, 0.0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(spectral_norm(SquareMatrix::rotation2(0.7)) == doctest::Approx(1.0).epsilon(1e-12));

    // against the power-iteration oracle, plus transpose invariance and the
    // ell-norm bracket
    SplitMix64 rng(12);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 5);
        const SquareMatrix m = random_matrix(rng, n, -2.0, 2.0);
        const double s = spectral_norm(m);
        CHECK(s == doctest::Approx(oracle::spectral_norm_power(m)).epsilon(1e-9));
        CHECK(s == doctest::Approx(spectral_norm(m.transposed())).epsilon(1e-10));
        CHECK(s <= std::sqrt(ell_norm(m) * ell_norm(m.transposed())) * (1.0 + 1e-12));
    }
}

TEST_CASE("spectral norm does not exceed ell norm on symmetric matrices") {
    SplitMix64 rng(13);
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        SquareMatrix m = random_matrix(rng, n);
        m = (m + m.transposed()).scaled(0.5);
        CHECK(spectral_norm(m) <= ell_norm(m) * (1.0 + 1e-12));
    }
    // ...but a non-symmetric matrix can beat it
    const SquareMatrix witness(2, {1.0, 1.0, 0.0, 0.0});
    CHECK(spectral_norm(witness) > ell_norm(witness));
}

TEST_CASE("norm axioms hold on random pairs") {
    SplitMix64 rng(14);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const SquareMatrix a = random_matrix(rng, n);
        const SquareMatrix b = random_matrix(rng, n);
        const double alpha = rng.uniform(-3.0, 3.0);
        CHECK(ell_norm(a.scaled(alpha)) == doctest::Approx(std::abs(alpha) * ell_norm(a)).epsilon(1e-12));
        CHECK(spectral_norm(a.scaled(alpha)) ==
              doctest::Approx(std::abs(alpha) * spectral_norm(a)).epsilon(1e-9));
        CHECK(ell_norm(a + b) <= ell_norm(a) + ell_norm(b) + 1e-12);
        CHECK(spectral_norm(a + b) <= spectral_norm(a) + spectral_norm(b) + 1e-9);
    }
}

TEST_CASE("min eigenvalue of the gram matrix") {
    const double d[] = {2.0, 3.0};
    CHECK(min_eigenvalue_gram(SquareMatrix::diagonal(d)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(min_eigenvalue_gram(SquareMatrix::rotation2(1.1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_eigenvalue_gram(SquareMatrix(2, {1.0, 1.0, 0.0, 1.0})) ==
          doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(min_eigenvalue_gram(SquareMatrix(2, {1.0, 1.0, 1.0, 1.0})) == 0.0); // clamped at zero
}

TEST_CASE("determinant and inverse") {
    CHECK(det(SquareMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-14));
    const double d[] = {2.0, 5.0};
    const SquareMatrix di = inverse(SquareMatrix::diagonal(d));
    CHECK(di(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(di(1, 1) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(det(SquareMatrix::diagonal(d)) == doctest::Approx(10.0).epsilon(1e-14));

    const SquareMatrix sh(2, {1.0, 1.0, 0.0, 1.0});
    const SquareMatrix shi = inverse(sh);
    CHECK(shi(0, 0) == doctest::Approx(1.0));
    CHECK(shi(0, 1) == doctest::Approx(-1.0));
    CHECK(shi(1, 0) == doctest::Approx(0.0));
    CHECK(shi(1, 1) == doctest::Approx(1.0));
    CHECK(det(sh) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(inverse(SquareMatrix(2, {1.0, 1.0, 1.0, 1.0})), SingularMatrix);
    CHECK(det(SquareMatrix(2, {1.0, 1.0, 1.0, 1.0})) == 0.0);
    CHECK(is_numerically_singular(SquareMatrix(3)));

    // residual of B * inverse(B) on random well-conditioned matrices
    SplitMix64 rng(15);
    int tested = 0;
    while (tested < 100) {
        const int n = 2 + static_cast<int>(rng.next() % 7);
        const SquareMatrix m = random_matrix(rng, n);
        if (is_numerically_singular(m) || min_eigenvalue_gram(m) < 1e-4) continue;
        ++tested;
        const SquareMatrix prod = m * inverse(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("spectral identity routes agree") {
    auto rep = verify_spectral_identity(SquareMatrix::identity(2));
    CHECK(rep.pass);
    CHECK(rep.diagnostic("min_eigenvalue_gram") == doctest::Approx(1.0).epsilon(1e-12));

    rep = verify_spectral_identity(SquareMatrix(2, {1.0, 1.0, 0.0, 1.0}));
    CHECK(rep.pass);
    const double golden_low = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(rep.diagnostic("min_eigenvalue_gram") == doctest::Approx(golden_low).epsilon(1e-10));
    // min and max Gram eigenvalues of a det-1 matrix multiply to 1
    CHECK(golden_low * (3.0 + std::sqrt(5.0)) / 2.0 == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(verify_spectral_identity(SquareMatrix(2, {1.0, 1.0, 1.0, 1.0})), SingularMatrix);

    SplitMix64 rng(16);
    int tested = 0;
    while (tested < 100) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const SquareMatrix m = random_matrix(rng, n);
        if (is_numerically_singular(m) || min_eigenvalue_gram(m) < 1e-4) continue;
        ++tested;
        CHECK(verify_spectral_identity(m).pass);
    }
}

TEST_CASE("matrix construction rejects bad input") {
    CHECK_THROWS_AS(SquareMatrix(2, {1.0, 2.0, 3.0}), InvalidArgument);
    CHECK_THROWS_AS(SquareMatrix(2, {1.0, 2.0, 3.0, std::nan("")}), InvalidArgument);
    CHECK_THROWS_AS(SquareMatrix(0), InvalidArgument);
}
