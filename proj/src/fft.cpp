#include "vdm/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vdm {

namespace {

bool is_pow2(size_t n) { return n && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_radix2(std::complex<double>* v, size_t n, bool inverse) {
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = v[i + k];
                const std::complex<double> t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

// Bluestein's chirp-z transform for arbitrary n, built on a radix-2 FFT of
// size >= 2n-1.
void fft_bluestein(std::vector<std::complex<double>>& v, bool inverse) {
    const size_t n = v.size();
    size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> chirp(n);
    for (size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small.
        const double ang = std::numbers::pi * static_cast<double>((k * k) % (2 * n)) / static_cast<double>(n);
        chirp[k] = std::complex<double>(std::cos(ang), sign * std::sin(ang));
    }

    std::vector<std::complex<double>> a(m), b(m);
    for (size_t k = 0; k < n; ++k) a[k] = v[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    fft_radix2(a.data(), m, false);
    fft_radix2(b.data(), m, false);
    for (size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_radix2(a.data(), m, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (size_t k = 0; k < n; ++k) v[k] = a[k] * scale * chirp[k];
}

}  // namespace

void fft_1d(std::vector<std::complex<double>>& v, bool inverse) {
    const size_t n = v.size();
    if (n == 0) throw std::invalid_argument("fft_1d: empty input");
    if (n == 1) return;
    if (is_pow2(n))
        fft_radix2(v.data(), n, inverse);
    else
        fft_bluestein(v, inverse);
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : v) x *= scale;
    }
}

void fft_2d(std::vector<std::complex<double>>& grid, int w, int h, bool inverse) {
    if (static_cast<size_t>(w) * h != grid.size()) throw std::invalid_argument("fft_2d: size mismatch");
    std::vector<std::complex<double>> line;
    line.resize(w);
    for (int y = 0; y < h; ++y) {
        std::copy_n(grid.begin() + static_cast<size_t>(y) * w, w, line.begin());
        fft_1d(line, inverse);
        std::copy_n(line.begin(), w, grid.begin() + static_cast<size_t>(y) * w);
    }
    line.resize(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) line[y] = grid[static_cast<size_t>(y) * w + x];
        fft_1d(line, inverse);
        for (int y = 0; y < h; ++y) grid[static_cast<size_t>(y) * w + x] = line[y];
    }
}

}  // namespace vdm
