#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hkit/box.hpp"

namespace hkit {

// Real-valued function sampled at the cell centers of a uniform grid over a
// box. values are row-major with axis 0 slowest; per-axis resolutions must be
// powers of two (the spectral transforms demand it, and everything else is
// happy to comply).
class GridFunction {
public:
    GridFunction(Box box, std::vector<int> resolution);
    GridFunction(Box box, std::vector<int> resolution, std::vector<double> values);

    int dim() const { return box_.dim(); }
    const Box& box() const { return box_; }
    const std::vector<int>& resolution() const { return res_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    double spacing(int axis) const { return box_.length(axis) / res_[static_cast<std::size_t>(axis)]; }
    double cell_volume() const;

    double operator[](std::int64_t flat) const { return values_[static_cast<std::size_t>(flat)]; }
    double& operator[](std::int64_t flat) { return values_[static_cast<std::size_t>(flat)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    void unflatten(std::int64_t flat, std::span<int> multi) const;
    std::int64_t flatten(std::span<const int> multi) const;
    // cell center of the given flat index
    void point(std::int64_t flat, std::span<double> out) const;

    // multilinear interpolation inside the box, exactly 0 outside
    double eval_interp(std::span<const double> x) const;

    double l1_norm() const;      // Sum |v| * cell volume
    double l2_norm() const;      // sqrt(Sum v^2 * cell volume)
    double integral() const;     // Sum v * cell volume
    double mean_value() const;   // integral / box volume
    double max_abs() const;

    GridFunction scaled(double s) const;
    GridFunction operator+(const GridFunction& rhs) const; // same layout required
    GridFunction operator-(const GridFunction& rhs) const;

    void save_csv(const std::string& path) const;
    static GridFunction load_csv(const std::string& path);

private:
    void check_same_layout(const GridFunction& rhs) const;

    Box box_;
    std::vector<int> res_;
    std::vector<double> values_;
};

enum class FunctionFamily { Constant, Gaussian, Indicator, AtomProfile, PolyBump };
enum class AtomShape { SignSplit, ShellDifference };

// Analytic test-function families for sampling onto grids.
struct FunctionSpec {
    FunctionFamily family = FunctionFamily::Constant;
    double amplitude = 1.0;
    std::vector<double> center; // gaussian / atom / poly-bump
    double sigma = 1.0;         // gaussian: amplitude * exp(-|x - center|^2 / sigma^2)
    Box box;                    // indicator support
    double radius = 1.0;        // atom / poly-bump ball radius
    AtomShape shape = AtomShape::SignSplit;
    std::vector<int> powers;    // poly-bump per-axis monomial powers

    static FunctionSpec constant(int dim, double value);
    static FunctionSpec gaussian(std::vector<double> center, double sigma = 1.0, double amplitude = 1.0);
    static FunctionSpec indicator(Box support, double amplitude = 1.0);
    // continuum atom profile (exact mean zero in the continuum; for the
    // discretely mean-zero version see make_atom)
    static FunctionSpec atom_profile(std::vector<double> center, double radius, AtomShape shape);
    static FunctionSpec poly_bump(std::vector<double> center, double radius, std::vector<int> powers,
                                  double amplitude = 1.0);

    int dim() const;
    double operator()(std::span<const double> x) const;
    void validate() const;
};

GridFunction sample(const FunctionSpec& spec, const Box& box, std::vector<int> resolution);

} // namespace hkit
