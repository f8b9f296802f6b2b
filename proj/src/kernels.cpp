#include "hkit/kernels.hpp"

#include <cmath>
#include <string>

#include "hkit/errors.hpp"
#include "hkit/numeric.hpp"

namespace hkit {

// --- KernelSpec --------------------------------------------------------

KernelSpec KernelSpec::indicator(Box support, double amplitude) {
    KernelSpec k;
    k.family = KernelFamily::IndicatorBox;
    k.dim = support.dim();
    k.box = std::move(support);
    k.amplitude = amplitude;
    k.validate();
    return k;
}

KernelSpec KernelSpec::gaussian(std::vector<double> center, double sigma, double amplitude,
                                double truncation_sigmas) {
    KernelSpec k;
    k.family = KernelFamily::Gaussian;
    k.dim = static_cast<int>(center.size());
    k.center = std::move(center);
    k.sigma = sigma;
    k.amplitude = amplitude;
    k.truncation_sigmas = truncation_sigmas;
    k.validate();
    return k;
}

KernelSpec KernelSpec::radial_bump(std::vector<double> center, double radius, double amplitude) {
    KernelSpec k;
    k.family = KernelFamily::RadialBump;
    k.dim = static_cast<int>(center.size());
    k.center = std::move(center);
    k.radius = radius;
    k.amplitude = amplitude;
    k.validate();
    return k;
}

KernelSpec KernelSpec::product_power(Box support, std::vector<double> exponents, double amplitude) {
    KernelSpec k;
    k.family = KernelFamily::ProductPower;
    k.dim = support.dim();
    k.box = std::move(support);
    k.exponents = std::move(exponents);
    k.amplitude = amplitude;
    k.validate();
    return k;
}

void KernelSpec::validate() const {
    if (dim < 1) throw ConfigInvalid("kernel dimension must be >= 1");
    if (!std::isfinite(amplitude)) throw ConfigInvalid("kernel amplitude must be finite");
    switch (family) {
    case KernelFamily::IndicatorBox:
        if (box.dim() != dim) throw ConfigInvalid("indicator kernel box dimension mismatch");
        break;
    case KernelFamily::Gaussian:
        if (static_cast<int>(center.size()) != dim) throw ConfigInvalid("gaussian kernel center dimension mismatch");
        if (!(sigma > 0.0)) throw ConfigInvalid("gaussian kernel sigma must be positive");
        if (!(truncation_sigmas > 0.0)) throw ConfigInvalid("gaussian truncation must be positive");
        break;
    case KernelFamily::RadialBump:
        if (static_cast<int>(center.size()) != dim) throw ConfigInvalid("bump kernel center dimension mismatch");
        if (!(radius > 0.0)) throw ConfigInvalid("bump kernel radius must be positive");
        break;
    case KernelFamily::ProductPower:
        if (box.dim() != dim) throw ConfigInvalid("product-power kernel box dimension mismatch");
        if (static_cast<int>(exponents.size()) != dim)
            throw ConfigInvalid("product-power kernel needs one exponent per axis");
        break;
    }
}

double KernelSpec::operator()(std::span<const double> u) const {
    switch (family) {
    case KernelFamily::IndicatorBox:
        return box.contains(u) ? amplitude : 0.0;
    case KernelFamily::Gaussian: {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double d = u[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)];
            r2 += d * d;
        }
        const double cutoff = truncation_sigmas * sigma;
        if (r2 > cutoff * cutoff) return 0.0;
        return amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
    }
    case KernelFamily::RadialBump: {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double d = u[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)];
            r2 += d * d;
        }
        const double t2 = r2 / (radius * radius);
        if (t2 >= 1.0) return 0.0;
        return amplitude * std::exp(-1.0 / (1.0 - t2));
    }
    case KernelFamily::ProductPower: {
        if (!box.contains(u)) return 0.0;
        double v = amplitude;
        for (int i = 0; i < dim; ++i)
            v *= std::pow(std::abs(u[static_cast<std::size_t>(i)]), exponents[static_cast<std::size_t>(i)]);
        return v;
    }
    }
    return 0.0;
}

Box KernelSpec::support() const {
    switch (family) {
    case KernelFamily::IndicatorBox:
    case KernelFamily::ProductPower:
        return box;
    case KernelFamily::Gaussian:
        return Box::ball_bounds(center, truncation_sigmas * sigma);
    case KernelFamily::RadialBump:
        return Box::ball_bounds(center, radius);
    }
    return box;
}

// --- MatrixFamily ------------------------------------------------------

MatrixFamily MatrixFamily::scalar_dilation(int n) {
    if (n < 1) throw ConfigInvalid("scalar-dilation needs dimension >= 1");
    return MatrixFamily(MatrixFamilyKind::ScalarDilation, n);
}

MatrixFamily MatrixFamily::diagonal(int n) {
    if (n < 1) throw ConfigInvalid("diagonal family needs dimension >= 1");
    return MatrixFamily(MatrixFamilyKind::Diagonal, n);
}

MatrixFamily MatrixFamily::rotation_scale(double theta0, double theta1, double rho0, double rho1) {
    MatrixFamily f(MatrixFamilyKind::RotationScale, 2);
    f.theta0 = theta0;
    f.theta1 = theta1;
    f.rho0 = rho0;
    f.rho1 = rho1;
    return f;
}

MatrixFamily MatrixFamily::shear(double shear0, double shear1, double scale0, double scale1) {
    MatrixFamily f(MatrixFamilyKind::Shear, 2);
    f.shear0 = shear0;
    f.shear1 = shear1;
    f.scale0 = scale0;
    f.scale1 = scale1;
    return f;
}

MatrixFamily MatrixFamily::constant(SquareMatrix m) {
    MatrixFamily f(MatrixFamilyKind::Constant, m.dim());
    f.constant_det_ = det(m);
    if (!is_numerically_singular(m)) f.constant_inverse_ = inverse(m);
    f.constant_ = std::move(m);
    return f;
}

MatrixFamily MatrixFamily::tabulated(int n, std::function<SquareMatrix(std::span<const double>)> fn) {
    if (n < 1) throw ConfigInvalid("tabulated family needs dimension >= 1");
    MatrixFamily f(MatrixFamilyKind::Tabulated, n);
    f.callback_ = std::move(fn);
    return f;
}

MatrixFamily MatrixFamily::inverted() const {
    MatrixFamily f = *this;
    f.inverted_ = !f.inverted_;
    return f;
}

bool MatrixFamily::analytic_inverse_available() const {
    switch (kind_) {
    case MatrixFamilyKind::Tabulated: return false;
    case MatrixFamilyKind::Constant: return constant_inverse_.has_value();
    default: return true;
    }
}

bool MatrixFamily::analytic_det_available() const {
    return kind_ != MatrixFamilyKind::Tabulated;
}

double MatrixFamily::dilation_scalar(std::span<const double> u) const {
    if (dim_ == 1) return u[0];
    double r2 = 0.0;
    for (int i = 0; i < dim_; ++i) r2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    return std::sqrt(r2);
}

SquareMatrix MatrixFamily::base_matrix_at(std::span<const double> u) const {
    switch (kind_) {
    case MatrixFamilyKind::ScalarDilation: {
        const double c = dilation_scalar(u);
        SquareMatrix m(dim_);
        for (int i = 0; i < dim_; ++i) m(i, i) = c;
        return m;
    }
    case MatrixFamilyKind::Diagonal:
        return SquareMatrix::diagonal(u.subspan(0, static_cast<std::size_t>(dim_)));
    case MatrixFamilyKind::RotationScale: {
        const double rho = rho0 + rho1 * dilation_scalar(u);
        const double theta = theta0 + theta1 * u[0];
        return SquareMatrix::rotation2(theta).scaled(rho);
    }
    case MatrixFamilyKind::Shear: {
        const double s = shear0 + shear1 * u[0];
        const double c = scale0 + scale1 * dilation_scalar(u);
        return SquareMatrix(2, {c, c * s, 0.0, c});
    }
    case MatrixFamilyKind::Constant:
        return *constant_;
    case MatrixFamilyKind::Tabulated: {
        SquareMatrix m = callback_(u);
        if (m.dim() != dim_) throw InvalidArgument("tabulated matrix family returned wrong dimension");
        return m;
    }
    }
    throw InvalidArgument("unknown matrix family kind");
}

namespace {
// below this the inverse determinant overflows long before any integrand matters
constexpr double kDetFloor = 1e-280;
} // namespace

bool MatrixFamily::singular_at(std::span<const double> u) const {
    double base_det = 0.0;
    switch (kind_) {
    case MatrixFamilyKind::ScalarDilation:
        base_det = std::pow(dilation_scalar(u), dim_);
        if (dilation_scalar(u) == 0.0) return true;
        break;
    case MatrixFamilyKind::RotationScale: {
        const double rho = rho0 + rho1 * dilation_scalar(u);
        base_det = rho * rho;
        break;
    }
    case MatrixFamilyKind::Shear: {
        const double c = scale0 + scale1 * dilation_scalar(u);
        base_det = c * c;
        break;
    }
    case MatrixFamilyKind::Constant:
        if (!constant_inverse_.has_value()) return true;
        base_det = constant_det_;
        break;
    default: {
        const SquareMatrix m = base_matrix_at(u);
        if (is_numerically_singular(m)) return true;
        base_det = det(m);
        break;
    }
    }
    return !std::isfinite(base_det) || std::abs(base_det) < kDetFloor;
}

double MatrixFamily::det_at(std::span<const double> u) const {
    double base_det;
    switch (kind_) {
    case MatrixFamilyKind::ScalarDilation:
        base_det = std::pow(dilation_scalar(u), dim_);
        break;
    case MatrixFamilyKind::Diagonal: {
        base_det = 1.0;
        for (int i = 0; i < dim_; ++i) base_det *= u[static_cast<std::size_t>(i)];
        break;
    }
    case MatrixFamilyKind::RotationScale: {
        const double rho = rho0 + rho1 * dilation_scalar(u);
        base_det = rho * rho;
        break;
    }
    case MatrixFamilyKind::Shear: {
        const double c = scale0 + scale1 * dilation_scalar(u);
        base_det = c * c;
        break;
    }
    case MatrixFamilyKind::Constant:
        base_det = constant_det_;
        break;
    default:
        base_det = det(base_matrix_at(u));
        break;
    }
    return inverted_ ? 1.0 / base_det : base_det;
}

SquareMatrix MatrixFamily::matrix_at(std::span<const double> u) const {
    if (!inverted_) return base_matrix_at(u);
    switch (kind_) {
    case MatrixFamilyKind::ScalarDilation: {
        const double c = dilation_scalar(u);
        SquareMatrix m(dim_);
        for (int i = 0; i < dim_; ++i) m(i, i) = 1.0 / c;
        return m;
    }
    case MatrixFamilyKind::Diagonal: {
        SquareMatrix m(dim_);
        for (int i = 0; i < dim_; ++i) m(i, i) = 1.0 / u[static_cast<std::size_t>(i)];
        return m;
    }
    case MatrixFamilyKind::RotationScale: {
        const double rho = rho0 + rho1 * dilation_scalar(u);
        const double theta = theta0 + theta1 * u[0];
        return SquareMatrix::rotation2(theta).transposed().scaled(1.0 / rho);
    }
    case MatrixFamilyKind::Shear: {
        const double s = shear0 + shear1 * u[0];
        const double c = scale0 + scale1 * dilation_scalar(u);
        return SquareMatrix(2, {1.0 / c, -s / c, 0.0, 1.0 / c});
    }
    case MatrixFamilyKind::Constant:
        if (!constant_inverse_.has_value()) throw SingularMatrix("constant matrix family is singular");
        return *constant_inverse_;
    case MatrixFamilyKind::Tabulated:
        return inverse(base_matrix_at(u));
    }
    throw InvalidArgument("unknown matrix family kind");
}

std::string MatrixFamily::family_name() const {
    std::string name;
    switch (kind_) {
    case MatrixFamilyKind::ScalarDilation: name = "scalar-dilation"; break;
    case MatrixFamilyKind::Diagonal: name = "diagonal"; break;
    case MatrixFamilyKind::RotationScale: name = "rotation-scale"; break;
    case MatrixFamilyKind::Shear: name = "shear"; break;
    case MatrixFamilyKind::Constant: name = "constant"; break;
    case MatrixFamilyKind::Tabulated: name = "tabulated"; break;
    }
    return inverted_ ? name + "^-1" : name;
}

// --- kernel norms ------------------------------------------------------

namespace {

struct PassResult {
    double value = 0.0;
    double abs_mass = 0.0;
    double skipped_mass = 0.0;
    std::int64_t used = 0;
    std::int64_t skipped = 0;
};

// One quadrature pass of Integral |Phi(u)| * weight(u) du. weight may throw
// (node-level identity violations); a negative family determinant is fine,
// near-singular nodes are skipped with their |Phi| mass recorded.
template <typename WeightFn>
PassResult weighted_pass(const KernelSpec& phi, const MatrixFamily* fam, QuadRule rule, const Box& box,
                         int nodes_per_axis, WeightFn&& weight) {
    const TensorQuadrature quad(rule, box, nodes_per_axis);
    const auto total = static_cast<std::size_t>(quad.size());
    const int n = phi.dim;

    std::vector<double> contrib(total, 0.0), absmass(total, 0.0), skipmass(total, 0.0);
    parallel_for(total, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (std::size_t i = lo; i < hi; ++i) {
            quad.point(static_cast<std::int64_t>(i), u);
            const double w = quad.weight(static_cast<std::int64_t>(i));
            const double p = std::abs(phi(u));
            absmass[i] = w * p;
            if (p == 0.0) continue;
            if (fam != nullptr && fam->singular_at(u)) {
                skipmass[i] = w * p;
                continue;
            }
            contrib[i] = w * p * weight(u, static_cast<std::int64_t>(i));
        }
    });

    PassResult r;
    r.value = pairwise_sum(contrib);
    r.abs_mass = pairwise_sum(absmass);
    r.skipped_mass = pairwise_sum(skipmass);
    for (std::size_t i = 0; i < total; ++i) {
        if (skipmass[i] > 0.0)
            ++r.skipped;
        else
            ++r.used;
    }
    return r;
}

template <typename WeightFn>
NormReport run_norm(const KernelSpec& phi, const MatrixFamily* fam, const QuadratureSpec& q,
                    const NormOptions& opts, WeightFn&& weight) {
    phi.validate();
    q.validate();
    if (fam != nullptr && fam->dim() != phi.dim)
        throw ConfigInvalid("kernel and matrix family dimensions differ");

    const Box box = q.box.has_value() ? *q.box : phi.support();
    if (!box.contains(phi.support()))
        throw ConfigInvalid("quadrature truncation box must contain the kernel support");

    const PassResult base = weighted_pass(phi, fam, q.rule, box, q.nodes_per_axis, weight);
    const PassResult fine = weighted_pass(phi, fam, q.rule, box, q.nodes_per_axis * q.refine, weight);

    const double scale = std::max(std::abs(fine.value), std::abs(base.value));
    const double convergence = scale > 0.0 ? std::abs(fine.value - base.value) / scale : 0.0;

    NormReport rep;
    rep.value = fine.value;
    rep.convergence = convergence;
    rep.skipped_mass = fine.abs_mass > 0.0 ? fine.skipped_mass / fine.abs_mass : 0.0;
    rep.nodes_used = fine.used;
    rep.nodes_skipped = fine.skipped;

    if (convergence > opts.rtol_quad)
        throw QuadratureDiverged("norm changed by " + std::to_string(convergence) +
                                 " under refinement (rtol " + std::to_string(opts.rtol_quad) + ")");
    if (rep.skipped_mass > opts.max_skipped_mass)
        throw TooMuchSkippedMass("skipped |Phi| mass ratio " + std::to_string(rep.skipped_mass) +
                                 " exceeds " + std::to_string(opts.max_skipped_mass));
    return rep;
}

} // namespace

NormReport norm_l_a(const KernelSpec& phi, const MatrixFamily& a, const QuadratureSpec& q,
                    const NormOptions& opts) {
    return run_norm(phi, &a, q, opts, [&](std::span<const double> u, std::int64_t) {
        return std::abs(1.0 / a.det_at(u));
    });
}

NormReport norm_lstar(const KernelSpec& phi, const MatrixFamily& b, const QuadratureSpec& q,
                      const NormOptions& opts) {
    const int n = phi.dim;
    return run_norm(phi, &b, q, opts, [&, n](std::span<const double> u, std::int64_t) {
        return std::pow(ell_norm(b.matrix_at(u)), n);
    });
}

NormReport norm_l2(const KernelSpec& phi, const MatrixFamily& b, const QuadratureSpec& q,
                   const NormOptions& opts) {
    const int n = phi.dim;
    // deterministic subsample for the node-level spectral identity
    const std::int64_t budget = 1024;
    std::int64_t total = 1;
    for (int a = 0; a < n; ++a) total *= q.nodes_per_axis * q.refine;
    const std::int64_t stride = std::max<std::int64_t>(1, total / budget);

    return run_norm(phi, &b, q, opts, [&, n, stride](std::span<const double> u, std::int64_t i) {
        const SquareMatrix b_u = b.matrix_at(u);
        const double s = spectral_norm(b_u);
        if (i % stride == 0) {
            const SquareMatrix a_u = b.is_inverted() ? b.base_matrix_at(u) : inverse(b_u);
            const double l1 = min_eigenvalue_gram(a_u.transposed());
            const double dev = std::abs(std::pow(s, n) * std::pow(l1, 0.5 * n) - 1.0);
            if (dev > 1e-8)
                throw SpectralIdentityViolated("node identity deviation " + std::to_string(dev));
        }
        return std::pow(s, n);
    });
}

NormReport kernel_abs_mass(const KernelSpec& phi, const QuadratureSpec& q, const NormOptions& opts) {
    return run_norm(phi, nullptr, q, opts, [](std::span<const double>, std::int64_t) { return 1.0; });
}

ConditionComparison compare_conditions(const KernelSpec& phi, const MatrixFamily& a,
                                       const QuadratureSpec& q, const NormOptions& opts) {
    ConditionComparison cmp;
    cmp.l_a = norm_l_a(phi, a, q, opts);
    const MatrixFamily b = a.inverted();
    cmp.lstar = norm_lstar(phi, b, q, opts);
    cmp.l2 = norm_l2(phi, b, q, opts);
    cmp.ratio_l2_lstar = cmp.lstar.value > 0.0 ? cmp.l2.value / cmp.lstar.value : 0.0;
    cmp.ratio_la_l2 = cmp.l2.value > 0.0 ? cmp.l_a.value / cmp.l2.value : 0.0;
    cmp.smallest = "L_A";
    double best = cmp.l_a.value;
    if (cmp.l2.value < best) {
        best = cmp.l2.value;
        cmp.smallest = "L2";
    }
    if (cmp.lstar.value < best) {
        best = cmp.lstar.value;
        cmp.smallest = "L*";
    }
    return cmp;
}

} // namespace hkit
