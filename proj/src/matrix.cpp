#include "hkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hkit/errors.hpp"

namespace hkit {

namespace {

constexpr double kSymTol = 1e-12;      // relative to Frobenius norm
constexpr double kEigTol = 1e-12;      // relative to Frobenius norm
constexpr int kMaxSweeps = 50;
constexpr double kDetTol = 1e-12;      // relative to max|entry|^n
constexpr double kIdentityTol = 1e-8;  // verify_spectral_identity

void require_finite(std::span<const double> e) {
    for (double v : e)
        if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
}

double det_threshold(const SquareMatrix& b) {
    const double scale = b.max_abs();
    return kDetTol * std::pow(scale, b.dim());
}

} // namespace

SquareMatrix::SquareMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 1) throw InvalidArgument("matrix dimension must be >= 1");
}

SquareMatrix::SquareMatrix(int n, std::vector<double> entries) : n_(n), e_(std::move(entries)) {
    if (n < 1) throw InvalidArgument("matrix dimension must be >= 1");
    if (e_.size() != static_cast<std::size_t>(n) * n)
        throw InvalidArgument("entry count does not match dimension");
    require_finite(e_);
}

SquareMatrix SquareMatrix::identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> d) {
    SquareMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    require_finite(m.e_);
    return m;
}

SquareMatrix SquareMatrix::rotation2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return SquareMatrix(2, {c, -s, s, c});
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
    if (rhs.n_ != n_) throw InvalidArgument("dimension mismatch in matrix product");
    SquareMatrix out(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < n_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& rhs) const {
    if (rhs.n_ != n_) throw InvalidArgument("dimension mismatch in matrix sum");
    SquareMatrix out(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] + rhs.e_[i];
    return out;
}

SquareMatrix SquareMatrix::scaled(double s) const {
    SquareMatrix out(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] * s;
    require_finite(out.e_);
    return out;
}

double SquareMatrix::max_abs() const {
    double m = 0.0;
    for (double v : e_) m = std::max(m, std::abs(v));
    return m;
}

double SquareMatrix::frobenius() const {
    double s = 0.0;
    for (double v : e_) s += v * v;
    return std::sqrt(s);
}

void SquareMatrix::apply_row(std::span<const double> x, std::span<double> y) const {
    for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += x[static_cast<std::size_t>(i)] * (*this)(i, j);
        y[static_cast<std::size_t>(j)] = s;
    }
}

double ell_norm(const SquareMatrix& b) {
    const int n = b.dim();
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += std::abs(b(i, j));
        best = std::max(best, col);
    }
    return best;
}

EigenReport symmetric_eigenvalues(const SquareMatrix& s) {
    const int n = s.dim();
    const double fro = s.frobenius();

    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
    if (asym > kSymTol * std::max(fro, 1e-300))
        throw NotSymmetric("asymmetry " + std::to_string(asym) + " exceeds tolerance");

    SquareMatrix a = s;
    // average the two triangles so rotations see an exactly symmetric matrix
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }

    const double tol = kEigTol * fro;
    EigenReport rep;
    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));

    int sweep = 0;
    while (off > tol && sweep < kMaxSweeps) {
        ++sweep;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
        off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    }
    if (off > tol)
        throw NoConvergence("Jacobi residual " + std::to_string(off) + " after " +
                            std::to_string(sweep) + " sweeps");

    rep.sweeps_used = sweep;
    rep.residual = off;
    rep.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rep.eigenvalues[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    return rep;
}

SquareMatrix gram(const SquareMatrix& b) {
    const int n = b.dim();
    SquareMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += b(k, i) * b(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return g;
}

double spectral_norm(const SquareMatrix& b) {
    const auto eig = symmetric_eigenvalues(gram(b));
    return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

double min_eigenvalue_gram(const SquareMatrix& b) {
    const auto eig = symmetric_eigenvalues(gram(b));
    return std::max(0.0, eig.eigenvalues.front());
}

double det(const SquareMatrix& b) {
    const int n = b.dim();
    SquareMatrix a = b;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            d = -d;
        }
        d *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return d;
}

bool is_numerically_singular(const SquareMatrix& b) {
    if (b.max_abs() == 0.0) return true;
    return std::abs(det(b)) < det_threshold(b);
}

SquareMatrix inverse(const SquareMatrix& b) {
    if (is_numerically_singular(b))
        throw SingularMatrix("matrix is singular within tolerance (|det| = " +
                             std::to_string(std::abs(det(b))) + ")");
    const int n = b.dim();
    SquareMatrix a = b;
    SquareMatrix inv = SquareMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const double p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

VerificationReport verify_spectral_identity(const SquareMatrix& b) {
    const double l1 = min_eigenvalue_gram(b);

    const SquareMatrix binv = inverse(b);
    const double via_inverse_norm = 1.0 / (spectral_norm(binv) * spectral_norm(binv));

    const auto inv_gram_eig = symmetric_eigenvalues(inverse(gram(b)));
    const double via_inverse_gram = 1.0 / inv_gram_eig.eigenvalues.back();

    const double lo = std::min({l1, via_inverse_norm, via_inverse_gram});
    const double hi = std::max({l1, via_inverse_norm, via_inverse_gram});
    const double deviation = (hi - lo) / hi;

    VerificationReport rep;
    rep.name = "spectral-identity";
    rep.lhs = deviation;
    rep.rhs = kIdentityTol;
    rep.ratio = deviation / kIdentityTol;
    rep.tolerance = kIdentityTol;
    rep.pass = deviation <= kIdentityTol;
    rep.add("min_eigenvalue_gram", l1);
    rep.add("inverse_spectral_norm_route", via_inverse_norm);
    rep.add("inverse_gram_route", via_inverse_gram);
    rep.add("max_pairwise_deviation", deviation);
    return rep;
}

} // namespace hkit
