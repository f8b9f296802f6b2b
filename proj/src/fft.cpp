#include "hkit/fft.hpp"

#include <cmath>
#include <numbers>

#include "hkit/errors.hpp"
#include "hkit/numeric.hpp"

namespace hkit {

void fft_1d(std::span<std::complex<double>> a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw NonPowerOfTwo("fft length must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

void fft_nd(std::vector<std::complex<double>>& data, const std::vector<int>& resolution, bool inverse) {
    std::size_t total = 1;
    for (int r : resolution) {
        if (r < 1 || (r & (r - 1)) != 0) throw NonPowerOfTwo("fft resolution must be a power of two per axis");
        total *= static_cast<std::size_t>(r);
    }
    if (data.size() != total) throw InvalidArgument("fft data size does not match resolution");

    const int ndim = static_cast<int>(resolution.size());
    for (int axis = 0; axis < ndim; ++axis) {
        const auto len = static_cast<std::size_t>(resolution[static_cast<std::size_t>(axis)]);
        std::size_t inner = 1;
        for (int a = axis + 1; a < ndim; ++a) inner *= static_cast<std::size_t>(resolution[static_cast<std::size_t>(a)]);
        const std::size_t outer = total / (len * inner);
        const std::size_t lines = outer * inner;

        parallel_for(lines, [&](std::size_t lo, std::size_t hi) {
            std::vector<std::complex<double>> line(len);
            for (std::size_t li = lo; li < hi; ++li) {
                const std::size_t o = li / inner;
                const std::size_t in = li % inner;
                const std::size_t base = o * len * inner + in;
                for (std::size_t k = 0; k < len; ++k) line[k] = data[base + k * inner];
                fft_1d(line, inverse);
                for (std::size_t k = 0; k < len; ++k) data[base + k * inner] = line[k];
            }
        });
    }
}

} // namespace hkit
