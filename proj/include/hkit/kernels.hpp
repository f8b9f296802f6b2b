#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hkit/box.hpp"
#include "hkit/matrix.hpp"
#include "hkit/quadrature.hpp"
#include "hkit/report.hpp"

namespace hkit {

enum class KernelFamily { IndicatorBox, Gaussian, RadialBump, ProductPower };

// Parametric kernel Phi(u) with a declared bounded effective support.
// Gaussians are truncated at truncation_sigmas * sigma; everything else is
// compactly supported by construction.
struct KernelSpec {
    KernelFamily family = KernelFamily::IndicatorBox;
    int dim = 1;
    double amplitude = 1.0;
    Box box;                       // indicator-box / product-power support
    std::vector<double> center;    // gaussian / radial-bump
    double sigma = 1.0;            // gaussian width
    double truncation_sigmas = 8.0;
    double radius = 1.0;           // radial-bump radius
    std::vector<double> exponents; // product-power: Prod |u_i|^p_i on the box

    static KernelSpec indicator(Box support, double amplitude = 1.0);
    static KernelSpec gaussian(std::vector<double> center, double sigma, double amplitude = 1.0,
                               double truncation_sigmas = 8.0);
    static KernelSpec radial_bump(std::vector<double> center, double radius, double amplitude = 1.0);
    static KernelSpec product_power(Box support, std::vector<double> exponents, double amplitude = 1.0);

    double operator()(std::span<const double> u) const;
    Box support() const;
    void validate() const;
};

enum class MatrixFamilyKind { ScalarDilation, Diagonal, RotationScale, Shear, Constant, Tabulated };

// Measurable field u -> A(u) of n x n matrices, with analytic determinant
// and inverse wherever the family admits them. inverted() views the same
// field through u -> A(u)^{-1}.
class MatrixFamily {
public:
    // n = 1: A(u) = (u); n >= 2: A(u) = |u| * I
    static MatrixFamily scalar_dilation(int n);
    // A(u) = diag(u_1, ..., u_n)
    static MatrixFamily diagonal(int n);
    // n = 2: A(u) = rho(u) R(theta(u)), rho = rho0 + rho1 |u|, theta = theta0 + theta1 u_1
    static MatrixFamily rotation_scale(double theta0, double theta1, double rho0, double rho1);
    // n = 2: A(u) = c(u) [[1, s(u)], [0, 1]], s = shear0 + shear1 u_1, c = scale0 + scale1 |u|
    static MatrixFamily shear(double shear0, double shear1, double scale0 = 1.0, double scale1 = 0.0);
    // constant field (the config-level form of user-tabulated)
    static MatrixFamily constant(SquareMatrix m);
    // arbitrary user callback; determinant and inverse computed numerically
    static MatrixFamily tabulated(int n, std::function<SquareMatrix(std::span<const double>)> fn);

    MatrixFamily inverted() const;

    int dim() const { return dim_; }
    MatrixFamilyKind kind() const { return kind_; }
    bool is_inverted() const { return inverted_; }
    bool analytic_inverse_available() const;
    bool analytic_det_available() const;

    // near-singularity of the base matrix at u (scale-relative threshold)
    bool singular_at(std::span<const double> u) const;
    // the field value at u, already inverted when is_inverted()
    SquareMatrix matrix_at(std::span<const double> u) const;
    double det_at(std::span<const double> u) const;
    // base matrix regardless of the inversion flag
    SquareMatrix base_matrix_at(std::span<const double> u) const;

    std::string family_name() const;

    // family-specific parameters, exposed for sweeps
    double theta0 = 0.0, theta1 = 0.0;
    double rho0 = 0.0, rho1 = 1.0;
    double shear0 = 0.0, shear1 = 0.0;
    double scale0 = 1.0, scale1 = 0.0;

private:
    MatrixFamily(MatrixFamilyKind kind, int n) : kind_(kind), dim_(n) {}

    double dilation_scalar(std::span<const double> u) const;

    MatrixFamilyKind kind_;
    int dim_;
    bool inverted_ = false;
    std::optional<SquareMatrix> constant_;
    std::optional<SquareMatrix> constant_inverse_; // cached when nonsingular
    double constant_det_ = 0.0;
    std::function<SquareMatrix(std::span<const double>)> callback_;
};

struct NormOptions {
    double rtol_quad = 1e-3;       // refinement stability demanded of every norm
    double max_skipped_mass = 1e-6; // |Phi|-mass allowed at skipped nodes
};

// ||Phi||_{L_A} = Integral |Phi(u)| |det A^{-1}(u)| du
NormReport norm_l_a(const KernelSpec& phi, const MatrixFamily& a, const QuadratureSpec& q,
                    const NormOptions& opts = {});

// ||Phi||_{L*_B} = Integral |Phi(u)| ell_norm(B(u))^n du
NormReport norm_lstar(const KernelSpec& phi, const MatrixFamily& b, const QuadratureSpec& q,
                      const NormOptions& opts = {});

// ||Phi||_{L2_B} = Integral |Phi(u)| spectral_norm(B(u))^n du, with the
// node-level identity spectral(B)^n * l1(B^{-1})^{n/2} = 1 cross-checked on
// a deterministic subsample of nodes.
NormReport norm_l2(const KernelSpec& phi, const MatrixFamily& b, const QuadratureSpec& q,
                   const NormOptions& opts = {});

// plain Integral |Phi| (used for normalization and the orthogonal-family identity)
NormReport kernel_abs_mass(const KernelSpec& phi, const QuadratureSpec& q, const NormOptions& opts = {});

struct ConditionComparison {
    NormReport l_a;   // condition on L_A        (with the family A itself)
    NormReport lstar; // condition on L*_{A^-1}
    NormReport l2;    // condition on L2_{A^-1}
    double ratio_l2_lstar = 0.0;
    double ratio_la_l2 = 0.0;
    std::string smallest;
};

ConditionComparison compare_conditions(const KernelSpec& phi, const MatrixFamily& a,
                                       const QuadratureSpec& q, const NormOptions& opts = {});

} // namespace hkit
