#pragma once

#include <span>
#include <vector>

#include "hkit/report.hpp"

namespace hkit {

// Dense real n x n matrix, row-major. Small n only (the toolkit targets
// n <= 8); entries are validated finite at construction.
class SquareMatrix {
public:
    explicit SquareMatrix(int n); // zero matrix
    SquareMatrix(int n, std::vector<double> entries);

    static SquareMatrix identity(int n);
    static SquareMatrix diagonal(std::span<const double> d);
    static SquareMatrix rotation2(double theta);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    double& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> entries() const { return e_; }

    SquareMatrix transposed() const;
    SquareMatrix operator*(const SquareMatrix& rhs) const;
    SquareMatrix operator+(const SquareMatrix& rhs) const;
    SquareMatrix scaled(double s) const;

    double max_abs() const;
    double frobenius() const;

    // y = x * M with x a row vector
    void apply_row(std::span<const double> x, std::span<double> y) const;

private:
    int n_;
    std::vector<double> e_;
};

struct EigenReport {
    std::vector<double> eigenvalues; // ascending
    int sweeps_used = 0;
    double residual = 0.0; // max off-diagonal magnitude at termination
};

// max over columns of the absolute column sum (induced 1-norm)
double ell_norm(const SquareMatrix& b);

// Cyclic Jacobi on a symmetric matrix. Throws NotSymmetric when the
// asymmetry exceeds 1e-12 relative, NoConvergence after 50 sweeps.
EigenReport symmetric_eigenvalues(const SquareMatrix& s);

// sqrt(max eigenvalue of B^T B)
double spectral_norm(const SquareMatrix& b);

// smallest eigenvalue of B^T B, clamped below at 0
double min_eigenvalue_gram(const SquareMatrix& b);

// B^T B, symmetrized against roundoff
SquareMatrix gram(const SquareMatrix& b);

// Signed determinant via partial-pivot elimination. Total on finite input.
double det(const SquareMatrix& b);

// Gauss-Jordan inverse; throws SingularMatrix below the scaled threshold
// |det| < 1e-12 * max|entry|^n.
SquareMatrix inverse(const SquareMatrix& b);

bool is_numerically_singular(const SquareMatrix& b);

// Three routes to the same quantity: min eig of B^T B, the inverse-based
// 1/||B^{-1}||_2^2, and 1/(max eig of (B^T B)^{-1}). Pass when the maximal
// pairwise relative deviation is <= 1e-8.
VerificationReport verify_spectral_identity(const SquareMatrix& b);

} // namespace hkit
