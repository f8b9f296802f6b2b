#pragma once

#include <span>
#include <vector>

namespace hkit {

// Axis-aligned box in R^n.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_);

    static Box cube(int n, double lo, double hi);
    static Box ball_bounds(std::span<const double> center, double radius);

    int dim() const { return static_cast<int>(lo.size()); }
    double length(int axis) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
    double volume() const;
    bool contains(std::span<const double> x) const;
    bool contains(const Box& inner) const;
    // scale about the center by factor s
    Box scaled(double s) const;
};

} // namespace hkit
