#pragma once

#include <cstdint>
#include <vector>

#include "hkit/grid.hpp"
#include "hkit/kernels.hpp"
#include "hkit/matrix.hpp"
#include "hkit/quadrature.hpp"
#include "hkit/report.hpp"

namespace hkit {

struct HausdorffApplication {
    GridFunction value;        // (Hf)(x) on f's grid layout
    double out_of_box_mass = 0.0; // mass-weighted mean fraction of |Phi| hitting images xA(u) outside f's box
    double skipped_mass = 0.0;    // |Phi|-mass fraction at near-singular nodes
    std::int64_t nodes_used = 0;
    std::int64_t nodes_skipped = 0;
};

// (Hf)(x) = Sum_k w_k Phi(u_k) f(x A(u_k)) at every cell center x, with
// x A(u) the row-vector-by-matrix product. Off-grid images are interpolated,
// images outside f's box contribute 0 and their |Phi|-mass is reported.
// Uses q.nodes_per_axis directly (no refinement pass).
HausdorffApplication apply_hausdorff(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                     const QuadratureSpec& q);

// ||Hf||_1 <= ||Phi||_{L_A} ||f||_1; pass iff lhs <= rhs * (1 + slack).
VerificationReport verify_l1_bound(const KernelSpec& phi, const MatrixFamily& a, const GridFunction& f,
                                   const QuadratureSpec& q, double slack = 0.05,
                                   const NormOptions& opts = {});

// g(x) = f(x M) sampled on the requested output grid.
GridFunction compose_with_matrix(const GridFunction& f, const SquareMatrix& m, const Box& out_box,
                                 std::vector<int> out_resolution);

} // namespace hkit
