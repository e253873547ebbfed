#pragma once

#include <complex>
#include <vector>

namespace vdm {

/// In-place complex FFT of arbitrary length (radix-2 for powers of two,
/// Bluestein otherwise). The inverse includes the 1/N scale.
void fft_1d(std::vector<std::complex<double>>& v, bool inverse);

/// Row-column 2-D FFT over a row-major w x h grid.
void fft_2d(std::vector<std::complex<double>>& grid, int w, int h, bool inverse);

}  // namespace vdm
