#include "hkit/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hkit/errors.hpp"

namespace hkit {

void QuadratureSpec::validate() const {
    if (nodes_per_axis < 2) throw ConfigInvalid("quadrature needs at least 2 nodes per axis");
    if (refine < 2) throw ConfigInvalid("quadrature refinement factor must be >= 2");
}

namespace {

void compute_gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
    x.resize(static_cast<std::size_t>(order));
    w.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_order
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < order; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(order - 1 - i)] = z;
        const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(order - 1 - i)] = wi;
    }
}

std::mutex g_gl_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<double>>> g_gl_cache;

} // namespace

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
    std::lock_guard<std::mutex> lock(g_gl_mutex);
    auto it = g_gl_cache.find(order);
    if (it == g_gl_cache.end()) {
        std::pair<std::vector<double>, std::vector<double>> entry;
        compute_gauss_legendre(order, entry.first, entry.second);
        it = g_gl_cache.emplace(order, std::move(entry)).first;
    }
    nodes = it->second.first;
    weights = it->second.second;
}

TensorQuadrature::TensorQuadrature(QuadRule rule, const Box& box, int nodes_per_axis)
    : box_(box), per_axis_(nodes_per_axis) {
    if (nodes_per_axis < 2) throw ConfigInvalid("quadrature needs at least 2 nodes per axis");
    const int n = box_.dim();
    total_ = 1;
    for (int a = 0; a < n; ++a) total_ *= per_axis_;

    std::vector<double> ref_x, ref_w;
    if (rule == QuadRule::GaussLegendre) {
        gauss_legendre(per_axis_, ref_x, ref_w);
    } else {
        ref_x.resize(static_cast<std::size_t>(per_axis_));
        ref_w.assign(static_cast<std::size_t>(per_axis_), 2.0 / per_axis_);
        for (int i = 0; i < per_axis_; ++i)
            ref_x[static_cast<std::size_t>(i)] = -1.0 + (2.0 * i + 1.0) / per_axis_;
    }

    axis_nodes_.resize(static_cast<std::size_t>(n) * per_axis_);
    axis_weights_.resize(static_cast<std::size_t>(n) * per_axis_);
    for (int a = 0; a < n; ++a) {
        const double mid = 0.5 * (box_.lo[static_cast<std::size_t>(a)] + box_.hi[static_cast<std::size_t>(a)]);
        const double half = 0.5 * box_.length(a);
        for (int i = 0; i < per_axis_; ++i) {
            axis_nodes_[static_cast<std::size_t>(a) * per_axis_ + i] = mid + half * ref_x[static_cast<std::size_t>(i)];
            axis_weights_[static_cast<std::size_t>(a) * per_axis_ + i] = half * ref_w[static_cast<std::size_t>(i)];
        }
    }
}

void TensorQuadrature::point(std::int64_t index, std::span<double> out) const {
    const int n = dim();
    for (int a = n - 1; a >= 0; --a) {
        const int i = static_cast<int>(index % per_axis_);
        index /= per_axis_;
        out[static_cast<std::size_t>(a)] = axis_nodes_[static_cast<std::size_t>(a) * per_axis_ + i];
    }
}

double TensorQuadrature::weight(std::int64_t index) const {
    const int n = dim();
    double w = 1.0;
    for (int a = n - 1; a >= 0; --a) {
        const int i = static_cast<int>(index % per_axis_);
        index /= per_axis_;
        w *= axis_weights_[static_cast<std::size_t>(a) * per_axis_ + i];
    }
    return w;
}

} // namespace hkit
