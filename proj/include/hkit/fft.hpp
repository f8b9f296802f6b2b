#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hkit {

// In-place radix-2 FFT; length must be a power of two. The inverse applies
// the 1/N normalization.
void fft_1d(std::span<std::complex<double>> a, bool inverse);

// n-D FFT of a row-major array (axis 0 slowest), one axis pass at a time.
void fft_nd(std::vector<std::complex<double>>& data, const std::vector<int>& resolution, bool inverse);

} // namespace hkit
