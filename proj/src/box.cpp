#include "hkit/box.hpp"

#include <cmath>

#include "hkit/errors.hpp"

namespace hkit {

Box::Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.empty()) throw InvalidArgument("box bounds must have equal, positive dimension");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) throw InvalidArgument("box bounds must be finite");
        if (!(hi[i] > lo[i])) throw InvalidArgument("box is degenerate: hi must exceed lo on every axis");
    }
}

Box Box::cube(int n, double lo, double hi) {
    return Box(std::vector<double>(static_cast<std::size_t>(n), lo),
               std::vector<double>(static_cast<std::size_t>(n), hi));
}

Box Box::ball_bounds(std::span<const double> center, double radius) {
    std::vector<double> lo(center.size()), hi(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        lo[i] = center[i] - radius;
        hi[i] = center[i] + radius;
    }
    return Box(std::move(lo), std::move(hi));
}

double Box::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= length(a);
    return v;
}

bool Box::contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

bool Box::contains(const Box& inner) const {
    if (inner.dim() != dim()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (inner.lo[i] < lo[i] - 1e-12 * (hi[i] - lo[i]) || inner.hi[i] > hi[i] + 1e-12 * (hi[i] - lo[i]))
            return false;
    return true;
}

Box Box::scaled(double s) const {
    std::vector<double> l(lo.size()), h(hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double c = 0.5 * (lo[i] + hi[i]);
        const double half = 0.5 * (hi[i] - lo[i]) * s;
        l[i] = c - half;
        h[i] = c + half;
    }
    return Box(std::move(l), std::move(h));
}

} // namespace hkit
