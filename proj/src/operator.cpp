#include "hkit/operator.hpp"

#include <cmath>

#include "hkit/errors.hpp"
#include "hkit/numeric.hpp"

namespace hkit {

HausdorffApplication apply_hausdorff(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                     const QuadratureSpec& q) {
    phi.validate();
    q.validate();
    const int n = f.dim();
    if (phi.dim != n || a.dim() != n)
        throw ConfigInvalid("kernel, matrix family and grid dimensions must agree");

    const Box ubox = q.box.has_value() ? *q.box : phi.support();
    if (!ubox.contains(phi.support()))
        throw ConfigInvalid("quadrature truncation box must contain the kernel support");
    const TensorQuadrature quad(q.rule, ubox, q.nodes_per_axis);

    // node precompute: signed coefficient w * Phi(u) and the matrix A(u);
    // near-singular nodes are dropped with their |Phi|-mass recorded
    struct Node {
        double coef;
        SquareMatrix mat;
    };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(quad.size()));
    double abs_mass = 0.0, skipped = 0.0;
    std::int64_t n_skipped = 0;
    {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < quad.size(); ++k) {
            quad.point(k, u);
            const double p = phi(u);
            if (p == 0.0) continue;
            const double w = quad.weight(k);
            abs_mass += w * std::abs(p);
            if (a.singular_at(u)) {
                skipped += w * std::abs(p);
                ++n_skipped;
                continue;
            }
            nodes.push_back({w * p, a.matrix_at(u)});
        }
    }

    HausdorffApplication out{GridFunction(f.box(), f.resolution()), 0.0, 0.0, 0, 0};
    out.nodes_used = static_cast<std::int64_t>(nodes.size());
    out.nodes_skipped = n_skipped;
    out.skipped_mass = abs_mass > 0.0 ? skipped / abs_mass : 0.0;

    auto vals = out.value.values();
    const auto npoints = static_cast<std::size_t>(f.size());
    std::vector<double> outside(npoints, 0.0);
    parallel_for(npoints, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (std::size_t i = lo; i < hi; ++i) {
            f.point(static_cast<std::int64_t>(i), x);
            double acc = 0.0, miss = 0.0;
            for (const Node& nd : nodes) {
                nd.mat.apply_row(x, y);
                if (f.box().contains(y)) {
                    acc += nd.coef * f.eval_interp(y);
                } else {
                    miss += std::abs(nd.coef);
                }
            }
            vals[i] = acc;
            outside[i] = miss;
        }
    });
    if (abs_mass > 0.0 && npoints > 0)
        out.out_of_box_mass = pairwise_sum(outside) / (abs_mass * static_cast<double>(npoints));
    return out;
}

VerificationReport verify_l1_bound(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                   const QuadratureSpec& q, double slack, const NormOptions& opts) {
    if (!(slack > 0.0)) throw ConfigInvalid("slack must be positive");
    const HausdorffApplication app = apply_hausdorff(phi, a, f, q);
    const NormReport norm = norm_l_a(phi, a, q, opts);
    const double f_l1 = f.l1_norm();

    VerificationReport rep;
    rep.name = "l1-bound";
    rep.lhs = app.value.l1_norm();
    rep.rhs = norm.value * f_l1;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.tolerance = slack;
    rep.pass = rep.lhs <= rep.rhs * (1.0 + slack);
    rep.add("norm_l_a", norm.value);
    rep.add("f_l1", f_l1);
    rep.add("out_of_box_mass", app.out_of_box_mass);
    rep.add("skipped_mass", app.skipped_mass);
    rep.add("norm_convergence", norm.convergence);
    return rep;
}

GridFunction compose_with_matrix(const GridFunction& f, const SquareMatrix& m, const Box& out_box,
                                 std::vector<int> out_resolution) {
    const int n = f.dim();
    if (m.dim() != n || out_box.dim() != n)
        throw InvalidArgument("matrix or output box dimension does not match grid");
    GridFunction g(out_box, std::move(out_resolution));
    auto vals = g.values();
    parallel_for(static_cast<std::size_t>(g.size()), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (std::size_t i = lo; i < hi; ++i) {
            g.point(static_cast<std::int64_t>(i), x);
            m.apply_row(x, y);
            vals[i] = f.eval_interp(y);
        }
    });
    return g;
}

} // namespace hkit
