#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hkit/box.hpp"

namespace hkit {

enum class QuadRule { GaussLegendre, Midpoint };

struct QuadratureSpec {
    QuadRule rule = QuadRule::GaussLegendre;
    int nodes_per_axis = 64;
    std::optional<Box> box; // truncation box; defaults to the kernel's declared support
    int refine = 2;         // factor for the convergence check

    void validate() const; // nodes >= 2, refine >= 2
};

// Gauss-Legendre nodes and weights on [-1, 1]; Newton on the Legendre
// recurrence, cached per order.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor-product rule over a box; nodes are enumerated in a fixed
// lexicographic order (axis 0 slowest) regardless of threading.
class TensorQuadrature {
public:
    TensorQuadrature(QuadRule rule, const Box& box, int nodes_per_axis);

    std::int64_t size() const { return total_; }
    int dim() const { return box_.dim(); }
    const Box& box() const { return box_; }

    void point(std::int64_t index, std::span<double> out) const;
    double weight(std::int64_t index) const;

private:
    Box box_;
    int per_axis_;
    std::int64_t total_;
    std::vector<double> axis_nodes_;   // per axis, scaled to [lo, hi]
    std::vector<double> axis_weights_; // per axis
};

} // namespace hkit
