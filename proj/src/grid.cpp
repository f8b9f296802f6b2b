#include "hkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hkit/errors.hpp"
#include "hkit/numeric.hpp"

namespace hkit {

namespace {

bool power_of_two(int r) { return r >= 1 && (r & (r - 1)) == 0; }

std::int64_t total_points(const std::vector<int>& res) {
    std::int64_t t = 1;
    for (int r : res) t *= r;
    return t;
}

double ball_volume(int n, double r) {
    return std::pow(std::numbers::pi, 0.5 * n) * std::pow(r, n) / std::tgamma(0.5 * n + 1.0);
}

} // namespace

GridFunction::GridFunction(Box box, std::vector<int> resolution)
    : box_(std::move(box)), res_(std::move(resolution)) {
    if (static_cast<int>(res_.size()) != box_.dim())
        throw InvalidArgument("grid resolution dimension does not match box");
    if (box_.dim() > 8) throw InvalidArgument("grids support at most 8 dimensions");
    for (int r : res_)
        if (!power_of_two(r)) throw NonPowerOfTwo("grid resolution must be a power of two per axis");
    values_.assign(static_cast<std::size_t>(total_points(res_)), 0.0);
}

GridFunction::GridFunction(Box box, std::vector<int> resolution, std::vector<double> values)
    : GridFunction(std::move(box), std::move(resolution)) {
    if (values.size() != values_.size())
        throw InvalidArgument("grid value count does not match resolution");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");
    values_ = std::move(values);
}

double GridFunction::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= spacing(a);
    return v;
}

void GridFunction::unflatten(std::int64_t flat, std::span<int> multi) const {
    for (int a = dim() - 1; a >= 0; --a) {
        const auto r = static_cast<std::int64_t>(res_[static_cast<std::size_t>(a)]);
        multi[static_cast<std::size_t>(a)] = static_cast<int>(flat % r);
        flat /= r;
    }
}

std::int64_t GridFunction::flatten(std::span<const int> multi) const {
    std::int64_t flat = 0;
    for (int a = 0; a < dim(); ++a)
        flat = flat * res_[static_cast<std::size_t>(a)] + multi[static_cast<std::size_t>(a)];
    return flat;
}

void GridFunction::point(std::int64_t flat, std::span<double> out) const {
    for (int a = dim() - 1; a >= 0; --a) {
        const auto r = static_cast<std::int64_t>(res_[static_cast<std::size_t>(a)]);
        const auto i = flat % r;
        flat /= r;
        out[static_cast<std::size_t>(a)] =
            box_.lo[static_cast<std::size_t>(a)] + (static_cast<double>(i) + 0.5) * spacing(a);
    }
}

double GridFunction::eval_interp(std::span<const double> x) const {
    const int n = dim();
    if (!box_.contains(x.subspan(0, static_cast<std::size_t>(n)))) return 0.0;

    int lo_idx[8];
    double frac[8];
    for (int a = 0; a < n; ++a) {
        const int r = res_[static_cast<std::size_t>(a)];
        const double t = (x[static_cast<std::size_t>(a)] - box_.lo[static_cast<std::size_t>(a)]) / spacing(a) - 0.5;
        if (t <= 0.0) {
            lo_idx[a] = 0;
            frac[a] = 0.0;
        } else if (t >= static_cast<double>(r - 1)) {
            lo_idx[a] = r - 1;
            frac[a] = 0.0;
        } else {
            const double fl = std::floor(t);
            lo_idx[a] = static_cast<int>(fl);
            frac[a] = t - fl;
        }
    }

    double acc = 0.0;
    const int corners = 1 << n;
    int multi[8];
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            const bool hi = (c >> a) & 1;
            w *= hi ? frac[a] : 1.0 - frac[a];
            int idx = lo_idx[a] + (hi ? 1 : 0);
            if (idx >= res_[static_cast<std::size_t>(a)]) idx = res_[static_cast<std::size_t>(a)] - 1;
            multi[a] = idx;
        }
        if (w == 0.0) continue;
        acc += w * values_[static_cast<std::size_t>(flatten(std::span<const int>(multi, static_cast<std::size_t>(n))))];
    }
    return acc;
}

double GridFunction::l1_norm() const {
    std::vector<double> a(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) a[i] = std::abs(values_[i]);
    return cell_volume() * pairwise_sum(a);
}

double GridFunction::l2_norm() const {
    std::vector<double> a(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) a[i] = values_[i] * values_[i];
    return std::sqrt(cell_volume() * pairwise_sum(a));
}

double GridFunction::integral() const { return cell_volume() * pairwise_sum(values_); }

double GridFunction::mean_value() const { return integral() / box_.volume(); }

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::scaled(double s) const {
    GridFunction g(*this);
    for (double& v : g.values_) v *= s;
    return g;
}

void GridFunction::check_same_layout(const GridFunction& rhs) const {
    if (res_ != rhs.res_ || box_.lo != rhs.box_.lo || box_.hi != rhs.box_.hi)
        throw InvalidArgument("grid layouts differ");
}

GridFunction GridFunction::operator+(const GridFunction& rhs) const {
    check_same_layout(rhs);
    GridFunction g(*this);
    for (std::size_t i = 0; i < values_.size(); ++i) g.values_[i] += rhs.values_[i];
    return g;
}

GridFunction GridFunction::operator-(const GridFunction& rhs) const {
    check_same_layout(rhs);
    GridFunction g(*this);
    for (std::size_t i = 0; i < values_.size(); ++i) g.values_[i] -= rhs.values_[i];
    return g;
}

void GridFunction::save_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw Error("cannot open " + path + " for writing");
    std::fprintf(f, "dim,%d\n", dim());
    std::fprintf(f, "box");
    for (int a = 0; a < dim(); ++a)
        std::fprintf(f, ",%.17g,%.17g", box_.lo[static_cast<std::size_t>(a)], box_.hi[static_cast<std::size_t>(a)]);
    std::fprintf(f, "\nresolution");
    for (int r : res_) std::fprintf(f, ",%d", r);
    std::fprintf(f, "\nvalues\n");
    for (double v : values_) std::fprintf(f, "%.17g\n", v);
    std::fclose(f);
}

GridFunction GridFunction::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    auto fields = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };

    std::string line;
    if (!std::getline(in, line)) throw ConfigInvalid("grid csv: missing dim line");
    auto f = fields(line);
    if (f.size() != 2 || f[0] != "dim") throw ConfigInvalid("grid csv: bad dim line");
    const int n = std::stoi(f[1]);
    if (n < 1 || n > 8) throw ConfigInvalid("grid csv: dimension out of range");

    if (!std::getline(in, line)) throw ConfigInvalid("grid csv: missing box line");
    f = fields(line);
    if (f[0] != "box" || static_cast<int>(f.size()) != 1 + 2 * n) throw ConfigInvalid("grid csv: bad box line");
    std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        lo[static_cast<std::size_t>(a)] = std::stod(f[static_cast<std::size_t>(1 + 2 * a)]);
        hi[static_cast<std::size_t>(a)] = std::stod(f[static_cast<std::size_t>(2 + 2 * a)]);
    }

    if (!std::getline(in, line)) throw ConfigInvalid("grid csv: missing resolution line");
    f = fields(line);
    if (f[0] != "resolution" || static_cast<int>(f.size()) != 1 + n)
        throw ConfigInvalid("grid csv: bad resolution line");
    std::vector<int> res(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) res[static_cast<std::size_t>(a)] = std::stoi(f[static_cast<std::size_t>(1 + a)]);

    if (!std::getline(in, line) || line != "values") throw ConfigInvalid("grid csv: missing values line");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(total_points(res)));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    return GridFunction(Box(std::move(lo), std::move(hi)), std::move(res), std::move(values));
}

// --- FunctionSpec ------------------------------------------------------

FunctionSpec FunctionSpec::constant(int dim, double value) {
    FunctionSpec s;
    s.family = FunctionFamily::Constant;
    s.amplitude = value;
    s.center.assign(static_cast<std::size_t>(dim), 0.0);
    s.validate();
    return s;
}

FunctionSpec FunctionSpec::gaussian(std::vector<double> center, double sigma, double amplitude) {
    FunctionSpec s;
    s.family = FunctionFamily::Gaussian;
    s.center = std::move(center);
    s.sigma = sigma;
    s.amplitude = amplitude;
    s.validate();
    return s;
}

FunctionSpec FunctionSpec::indicator(Box support, double amplitude) {
    FunctionSpec s;
    s.family = FunctionFamily::Indicator;
    s.center.assign(static_cast<std::size_t>(support.dim()), 0.0);
    s.box = std::move(support);
    s.amplitude = amplitude;
    s.validate();
    return s;
}

FunctionSpec FunctionSpec::atom_profile(std::vector<double> center, double radius, AtomShape shape) {
    FunctionSpec s;
    s.family = FunctionFamily::AtomProfile;
    s.center = std::move(center);
    s.radius = radius;
    s.shape = shape;
    s.validate();
    return s;
}

FunctionSpec FunctionSpec::poly_bump(std::vector<double> center, double radius, std::vector<int> powers,
                                     double amplitude) {
    FunctionSpec s;
    s.family = FunctionFamily::PolyBump;
    s.center = std::move(center);
    s.radius = radius;
    s.powers = std::move(powers);
    s.amplitude = amplitude;
    s.validate();
    return s;
}

int FunctionSpec::dim() const {
    return family == FunctionFamily::Indicator ? box.dim() : static_cast<int>(center.size());
}

void FunctionSpec::validate() const {
    if (dim() < 1) throw ConfigInvalid("function descriptor needs dimension >= 1");
    if (!std::isfinite(amplitude)) throw ConfigInvalid("function amplitude must be finite");
    switch (family) {
    case FunctionFamily::Constant:
    case FunctionFamily::Indicator:
        break;
    case FunctionFamily::Gaussian:
        if (!(sigma > 0.0)) throw ConfigInvalid("gaussian function sigma must be positive");
        break;
    case FunctionFamily::AtomProfile:
        if (!(radius > 0.0)) throw ConfigInvalid("atom profile radius must be positive");
        break;
    case FunctionFamily::PolyBump:
        if (!(radius > 0.0)) throw ConfigInvalid("poly-bump radius must be positive");
        if (powers.size() != center.size()) throw ConfigInvalid("poly-bump needs one power per axis");
        for (int p : powers)
            if (p < 0) throw ConfigInvalid("poly-bump powers must be nonnegative");
        break;
    }
}

double FunctionSpec::operator()(std::span<const double> x) const {
    const int n = dim();
    switch (family) {
    case FunctionFamily::Constant:
        return amplitude;
    case FunctionFamily::Gaussian: {
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            r2 += d * d;
        }
        return amplitude * std::exp(-r2 / (sigma * sigma));
    }
    case FunctionFamily::Indicator:
        return box.contains(x.subspan(0, static_cast<std::size_t>(n))) ? amplitude : 0.0;
    case FunctionFamily::AtomProfile: {
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            r2 += d * d;
        }
        if (r2 > radius * radius) return 0.0;
        const double sup = 1.0 / ball_volume(n, radius);
        if (shape == AtomShape::SignSplit) {
            const double d1 = x[0] - center[0];
            return amplitude * sup * (d1 > 0.0 ? 1.0 : (d1 < 0.0 ? -1.0 : 0.0));
        }
        // inner ball of radius r/2 at full height, shell weighted for
        // continuum mean zero: shell volume = (2^n - 1) * inner volume
        const double inner = 0.5 * radius;
        if (r2 <= inner * inner) return amplitude * sup;
        return -amplitude * sup / (std::pow(2.0, n) - 1.0);
    }
    case FunctionFamily::PolyBump: {
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            r2 += d * d;
        }
        const double t2 = r2 / (radius * radius);
        if (t2 >= 1.0) return 0.0;
        double v = amplitude * std::exp(-1.0 / (1.0 - t2));
        for (int a = 0; a < n; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            for (int p = 0; p < powers[static_cast<std::size_t>(a)]; ++p) v *= d;
        }
        return v;
    }
    }
    return 0.0;
}

GridFunction sample(const FunctionSpec& spec, const Box& box, std::vector<int> resolution) {
    spec.validate();
    if (spec.dim() != box.dim()) throw ConfigInvalid("function descriptor dimension does not match box");
    GridFunction g(box, std::move(resolution));
    const int n = g.dim();
    auto vals = g.values();
    parallel_for(static_cast<std::size_t>(g.size()), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::size_t i = lo; i < hi; ++i) {
            g.point(static_cast<std::int64_t>(i), x);
            vals[i] = spec(x);
        }
    });
    return g;
}

} // namespace hkit
