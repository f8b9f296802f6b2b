#include "hkit/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hkit/errors.hpp"
#include "hkit/fft.hpp"
#include "hkit/numeric.hpp"
#include "hkit/operator.hpp"

namespace hkit {

double ball_volume(int n, double radius) {
    return std::pow(std::numbers::pi, 0.5 * n) * std::pow(radius, n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

void validate_atom(const Atom& spec) {
    if (spec.dim < 1 || spec.dim > 8) throw ConfigInvalid("atom dimension must be in 1..8");
    if (static_cast<int>(spec.center.size()) != spec.dim) throw ConfigInvalid("atom center dimension mismatch");
    if (!(spec.radius > 0.0)) throw ConfigInvalid("atom radius must be positive");
}

double dist2(std::span<const double> x, std::span<const double> c, int n) {
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
        const double d = x[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(a)];
        d2 += d * d;
    }
    return d2;
}

bool is_scalar_multiple_of_identity(const SquareMatrix& m) {
    const int n = m.dim();
    const double scale = m.max_abs();
    if (scale == 0.0) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                if (std::abs(m(i, j) - m(0, 0)) > 1e-12 * scale) return false;
            } else if (std::abs(m(i, j)) > 1e-12 * scale) {
                return false;
            }
        }
    return true;
}

} // namespace

GridFunction make_atom(const Atom& spec, const Box& box, std::vector<int> resolution) {
    validate_atom(spec);
    if (!box.contains(Box::ball_bounds(spec.center, spec.radius)))
        throw BallOutsideBox("atom ball does not fit in the grid box");

    GridFunction g(box, std::move(resolution));
    const int n = g.dim();
    const double r2 = spec.radius * spec.radius;
    const double sup = 1.0 / ball_volume(n, spec.radius);

    std::vector<std::int64_t> plus, minus; // sign-split halves / inner & shell cells
    {
        std::vector<double> x(static_cast<std::size_t>(n));
        const double inner2 = 0.25 * r2;
        for (std::int64_t i = 0; i < g.size(); ++i) {
            g.point(i, x);
            const double d2 = dist2(x, spec.center, n);
            if (d2 > r2) continue;
            if (spec.profile == AtomShape::SignSplit) {
                const double d1 = x[0] - spec.center[0];
                if (d1 > 0.0)
                    plus.push_back(i);
                else if (d1 < 0.0)
                    minus.push_back(i);
            } else {
                if (d2 <= inner2)
                    plus.push_back(i);
                else
                    minus.push_back(i);
            }
        }
    }
    if (plus.empty() || minus.empty())
        throw InvalidArgument("grid resolution too coarse for the atom radius");

    double wp, wm;
    if (spec.profile == AtomShape::SignSplit) {
        // balance the two halves so the discrete mean is exactly zero while
        // the larger side keeps the full height
        if (plus.size() >= minus.size()) {
            wp = sup * static_cast<double>(minus.size()) / static_cast<double>(plus.size());
            wm = -sup;
        } else {
            wp = sup;
            wm = -sup * static_cast<double>(plus.size()) / static_cast<double>(minus.size());
        }
    } else {
        if (minus.size() < plus.size())
            throw InvalidArgument("grid resolution too coarse for the shell profile");
        wp = sup;
        wm = -sup * static_cast<double>(plus.size()) / static_cast<double>(minus.size());
    }
    for (std::int64_t i : plus) g[i] = wp;
    for (std::int64_t i : minus) g[i] = wm;
    return g;
}

VerificationReport check_atom(const GridFunction& g, std::span<const double> center, double radius,
                              double tol) {
    const int n = g.dim();
    if (static_cast<int>(center.size()) != n) throw InvalidArgument("atom center dimension mismatch");
    if (!(radius > 0.0) || !(tol > 0.0)) throw InvalidArgument("atom radius and tolerance must be positive");

    const double vol = ball_volume(n, radius);
    const double r2 = radius * radius;

    std::vector<double> leak_terms(static_cast<std::size_t>(g.size()), 0.0);
    double max_abs = 0.0;
    {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < g.size(); ++i) {
            const double v = std::abs(g[i]);
            max_abs = std::max(max_abs, v);
            g.point(i, x);
            if (dist2(x, center, n) > r2) leak_terms[static_cast<std::size_t>(i)] = v;
        }
    }
    const double leakage = g.cell_volume() * pairwise_sum(leak_terms);
    const double sup_excess = std::max(0.0, max_abs * vol - 1.0);
    const double mean_abs = std::abs(g.integral());

    VerificationReport rep;
    rep.name = "atom-check";
    rep.lhs = std::max({leakage, sup_excess, mean_abs});
    rep.rhs = tol;
    rep.ratio = rep.lhs / tol;
    rep.tolerance = 0.0;
    rep.pass = rep.lhs <= rep.rhs;
    rep.add("leakage", leakage);
    rep.add("sup_ratio", max_abs * vol);
    rep.add("sup_excess", sup_excess);
    rep.add("mean_abs", mean_abs);
    rep.add("ball_volume", vol);
    rep.add("leak_pass", leakage <= tol ? 1.0 : 0.0);
    rep.add("sup_pass", sup_excess <= tol ? 1.0 : 0.0);
    rep.add("mean_pass", mean_abs <= tol ? 1.0 : 0.0);
    return rep;
}

double atom_profile_constant(AtomShape profile, int n) {
    // jump size at the profile interfaces times interface area, in units of
    // the sup bound and the ball radius; controls how much l1-mass one grid
    // cell straddling an interface can misplace
    const double vn = ball_volume(n, 1.0);
    const double vn1 = n >= 2 ? ball_volume(n - 1, 1.0) : 1.0;
    if (profile == AtomShape::SignSplit) return static_cast<double>(n) + vn1 / vn;
    const double c = 1.0 / (std::pow(2.0, n) - 1.0);
    return static_cast<double>(n) * (c + (1.0 + c) / std::pow(2.0, n - 1));
}

double atom_check_tolerance(AtomShape profile, int n, double radius, double effective_spacing) {
    return 2.0 * atom_profile_constant(profile, n) * effective_spacing / radius;
}

GridFunction transform_atom(const GridFunction& a, const SquareMatrix& m, const Box& out_box,
                            std::vector<int> out_resolution) {
    if (m.dim() != a.dim()) throw InvalidArgument("matrix dimension does not match atom grid");
    if (is_numerically_singular(m)) throw SingularMatrix("atom transform needs a nonsingular matrix");
    const double l1 = min_eigenvalue_gram(m.transposed());
    GridFunction g = compose_with_matrix(a, m, out_box, std::move(out_resolution));
    return g.scaled(std::pow(l1, 0.5 * a.dim()));
}

std::vector<double> transformed_center(std::span<const double> center, const SquareMatrix& m) {
    const SquareMatrix inv = inverse(m);
    std::vector<double> out(center.size());
    inv.apply_row(center, out);
    return out;
}

double transformed_radius(double radius, const SquareMatrix& m) {
    return radius / std::sqrt(min_eigenvalue_gram(m.transposed()));
}

TransformedAtom transform_atom(const GridFunction& a, const Atom& spec, const SquareMatrix& m) {
    validate_atom(spec);
    if (is_numerically_singular(m)) throw SingularMatrix("atom transform needs a nonsingular matrix");
    std::vector<double> c = transformed_center(spec.center, m);
    const double r = transformed_radius(spec.radius, m);
    const Box out_box = Box::ball_bounds(c, r).scaled(1.3);
    TransformedAtom t{transform_atom(a, m, out_box, a.resolution()), std::move(c), r,
                      min_eigenvalue_gram(m.transposed())};
    return t;
}

TransformedAtom transform_atom(const GridFunction& a, const Atom& spec, const SquareMatrix& m,
                               const Box& out_box, std::vector<int> out_resolution) {
    validate_atom(spec);
    if (is_numerically_singular(m)) throw SingularMatrix("atom transform needs a nonsingular matrix");
    std::vector<double> c = transformed_center(spec.center, m);
    const double r = transformed_radius(spec.radius, m);
    if (!out_box.contains(Box::ball_bounds(c, r)))
        throw BallOutsideBox("transformed atom ball does not fit in the output box");
    TransformedAtom t{transform_atom(a, m, out_box, std::move(out_resolution)), std::move(c), r,
                      min_eigenvalue_gram(m.transposed())};
    return t;
}

VerificationReport verify_ellipsoid_containment(const SquareMatrix& m, double r, int num_samples,
                                                std::uint64_t seed) {
    if (num_samples < 1) throw InvalidArgument("need at least one sample");
    if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
    if (is_numerically_singular(m)) throw SingularMatrix("ellipsoid containment needs a nonsingular matrix");

    const int n = m.dim();
    const SquareMatrix inv = inverse(m);
    const double l1 = min_eigenvalue_gram(m.transposed());
    const double bound = r / std::sqrt(l1);

    SplitMix64 rng = substream(seed, 0);
    std::vector<double> p(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n));
    double max_norm = 0.0;
    std::int64_t violations = 0;
    for (int s = 0; s < num_samples; ++s) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int a = 0; a < n; ++a) {
                p[static_cast<std::size_t>(a)] = rng.normal();
                norm2 += p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(a)];
            }
        } while (norm2 < 1e-24);
        const double rad = r * std::pow(rng.uniform01(), 1.0 / n);
        const double scale = rad / std::sqrt(norm2);
        for (int a = 0; a < n; ++a) p[static_cast<std::size_t>(a)] *= scale;

        inv.apply_row(p, x);
        double xn2 = 0.0;
        for (int a = 0; a < n; ++a) xn2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        const double xn = std::sqrt(xn2);
        if (xn > bound * (1.0 + 1e-10)) ++violations;
        max_norm = std::max(max_norm, xn);
    }

    const double tight_threshold = 1.0 - 10.0 / std::sqrt(static_cast<double>(num_samples));
    const double attainment = max_norm / bound;

    VerificationReport rep;
    rep.name = "ellipsoid-containment";
    rep.lhs = max_norm;
    rep.rhs = bound;
    rep.ratio = attainment;
    rep.tolerance = 1e-10;
    rep.pass = violations == 0 && attainment >= tight_threshold;
    rep.add("l1", l1);
    rep.add("bound", bound);
    rep.add("violations", static_cast<double>(violations));
    rep.add("attainment", attainment);
    rep.add("tightness_threshold", tight_threshold);
    rep.add("samples", static_cast<double>(num_samples));
    return rep;
}

// --- Riesz transforms --------------------------------------------------

SpectralGrid::SpectralGrid(Box box, std::vector<int> resolution)
    : box_(std::move(box)), res_(std::move(resolution)) {
    if (static_cast<int>(res_.size()) != box_.dim())
        throw InvalidArgument("spectral grid resolution dimension mismatch");
    for (int r : res_)
        if (r < 1 || (r & (r - 1)) != 0) throw NonPowerOfTwo("spectral grid needs power-of-two resolutions");
}

double SpectralGrid::frequency(int axis, int k) const {
    const int size = res_[static_cast<std::size_t>(axis)];
    const int signed_k = k <= size / 2 ? k : k - size;
    return static_cast<double>(signed_k) / box_.length(axis);
}

bool SpectralGrid::nyquist_or_zero(int axis, int k) const {
    return k == 0 || 2 * k == res_[static_cast<std::size_t>(axis)];
}

std::complex<double> SpectralGrid::multiplier(int p, std::span<const int> k) const {
    const int n = dim();
    if (p < 1 || p > n) throw InvalidArgument("riesz axis index out of range");
    double norm2 = 0.0;
    for (int a = 0; a < n; ++a) {
        const double f = frequency(a, k[static_cast<std::size_t>(a)]);
        norm2 += f * f;
    }
    if (norm2 == 0.0) return {0.0, 0.0};
    const double mag = frequency(p - 1, k[static_cast<std::size_t>(p - 1)]) / std::sqrt(norm2);
    // a Nyquist index maps to itself under frequency negation, so the
    // multiplier there must be real for real input to stay real
    if (nyquist_or_zero(p - 1, k[static_cast<std::size_t>(p - 1)])) return {-mag, 0.0};
    return {0.0, -mag};
}

GridFunction riesz_transform(const GridFunction& f, int p) {
    const int n = f.dim();
    if (p < 1 || p > n) throw InvalidArgument("riesz axis index out of range");

    std::vector<std::complex<double>> data(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) data[static_cast<std::size_t>(i)] = f[i];
    fft_nd(data, f.resolution(), false);

    const SpectralGrid sg(f.box(), f.resolution());
    parallel_for(data.size(), [&](std::size_t lo, std::size_t hi) {
        int k[8];
        for (std::size_t i = lo; i < hi; ++i) {
            f.unflatten(static_cast<std::int64_t>(i), std::span<int>(k, static_cast<std::size_t>(n)));
            data[i] *= sg.multiplier(p, std::span<const int>(k, static_cast<std::size_t>(n)));
        }
    });
    fft_nd(data, f.resolution(), true);

    double imag2 = 0.0, all2 = 0.0;
    for (const auto& z : data) {
        imag2 += z.imag() * z.imag();
        all2 += std::norm(z);
    }
    if (all2 > 0.0 && std::sqrt(imag2) > 1e-10 * std::sqrt(all2))
        throw Error("riesz transform left a non-real residue");

    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return GridFunction(f.box(), f.resolution(), std::move(out));
}

H1Report h1_surrogate(const GridFunction& f) {
    H1Report rep;
    rep.mean = f.mean_value();
    rep.terms.push_back(f.l1_norm());
    for (int p = 1; p <= f.dim(); ++p) rep.terms.push_back(riesz_transform(f, p).l1_norm());
    for (double t : rep.terms) rep.total += t;
    return rep;
}

double h1_surrogate_norm(const GridFunction& f) { return h1_surrogate(f).total; }

GridFunction embed_zero_padded(const GridFunction& f) {
    const int n = f.dim();
    std::vector<int> res2(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const int r = f.resolution()[static_cast<std::size_t>(a)];
        if (r < 2) throw InvalidArgument("embedding needs at least 2 cells per axis");
        res2[static_cast<std::size_t>(a)] = 2 * r;
    }
    GridFunction g(f.box().scaled(2.0), std::move(res2));
    std::vector<int> multi(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < f.size(); ++i) {
        f.unflatten(i, multi);
        for (int a = 0; a < n; ++a) multi[static_cast<std::size_t>(a)] += f.resolution()[static_cast<std::size_t>(a)] / 2;
        g[g.flatten(multi)] = f[i];
    }
    return g;
}

double wraparound_estimate(const GridFunction& f) {
    const double small = h1_surrogate_norm(f);
    const double big = h1_surrogate_norm(embed_zero_padded(f));
    if (big == 0.0) return 0.0;
    return std::abs(big - small) / big;
}

VerificationReport verify_dilation_h1(const GridFunction& f, const SquareMatrix& m, double c_dil) {
    if (!(c_dil > 0.0)) throw InvalidArgument("dilation constant must be positive");
    if (m.dim() != f.dim()) throw InvalidArgument("matrix dimension does not match grid");
    if (is_numerically_singular(m)) throw SingularMatrix("dilation check needs a nonsingular matrix");

    // scale the output box by ||M^{-1}||_2: the image support scales the
    // same way, and for M = c I every sample of f(xM) lands exactly on a
    // cell center of f, making the invariance check sharp
    const int n = f.dim();
    const double l1 = min_eigenvalue_gram(m.transposed());
    const double spread = spectral_norm(inverse(m));
    const GridFunction g = compose_with_matrix(f, m, f.box().scaled(spread), f.resolution());

    const double h_g = h1_surrogate_norm(g);
    const double h_f = h1_surrogate_norm(f);
    const double rhs = std::pow(l1, -0.5 * n) * h_f;
    const double ratio = rhs > 0.0 ? h_g / rhs : 0.0;
    const bool scalar = is_scalar_multiple_of_identity(m);

    VerificationReport rep;
    rep.name = "dilation-h1";
    rep.lhs = h_g;
    rep.rhs = rhs;
    rep.ratio = ratio;
    rep.tolerance = c_dil - 1.0;
    rep.pass = h_g <= rhs * c_dil;
    if (scalar && std::abs(ratio - 1.0) > 0.02) rep.pass = false;
    rep.add("l1", l1);
    rep.add("h1_f", h_f);
    rep.add("h1_transformed", h_g);
    rep.add("f_mean", f.mean_value());
    rep.add("is_scalar_dilation", scalar ? 1.0 : 0.0);
    rep.add("dilation_invariance_error", scalar ? std::abs(ratio - 1.0) : 0.0);
    return rep;
}

VerificationReport verify_h1_bound(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                   const QuadratureSpec& q, double c_h1, const NormOptions& opts) {
    if (!(c_h1 > 0.0)) throw InvalidArgument("h1 bound constant must be positive");
    const HausdorffApplication app = apply_hausdorff(phi, a, f, q);
    const double lhs = h1_surrogate_norm(app.value);
    const NormReport norm2 = norm_l2(phi, a.inverted(), q, opts);
    const double h_f = h1_surrogate_norm(f);
    const double rhs = norm2.value * h_f;

    VerificationReport rep;
    rep.name = "h1-bound";
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    rep.tolerance = c_h1 - 1.0;
    rep.pass = lhs <= rhs * c_h1;
    rep.add("norm_l2", norm2.value);
    rep.add("h1_f", h_f);
    rep.add("h1_hf", lhs);
    rep.add("f_mean", f.mean_value());
    rep.add("out_of_box_mass", app.out_of_box_mass);
    rep.add("skipped_mass", app.skipped_mass);
    rep.add("norm_convergence", norm2.convergence);
    return rep;
}

} // namespace hkit
