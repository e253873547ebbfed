#pragma once
#include <ostream>

// Shared helpers and independent oracles for the test suites. Oracles here
// must not reuse the library's transform paths.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vdm/dct.hpp"
#include "vdm/image.hpp"

namespace testsupport {

// Absolute-tolerance comparison wrapper (the vendored doctest Approx only
// does relative epsilon).
struct AbsApprox {
    double value;
    double tol = 1e-12;
    explicit AbsApprox(double v) : value(v) {}
    AbsApprox& margin(double m) {
        tol = m;
        return *this;
    }
    AbsApprox& epsilon(double) { return *this; }
    AbsApprox& scale(double) { return *this; }
    friend bool operator==(double lhs, const AbsApprox& a) { return std::abs(lhs - a.value) <= a.tol; }
    friend bool operator==(const AbsApprox& a, double rhs) { return rhs == a; }
    friend std::ostream& operator<<(std::ostream& os, const AbsApprox& a) {
        return os << a.value << " +/- " << a.tol;
    }
};

// Orthonormal separable 2-D DCT-II, columns first then rows, written from
// the definition. out[v][u] = coefficient at vertical frequency v,
// horizontal frequency u.
inline std::vector<double> separable_dct2(const std::vector<float>& block, int n) {
    auto scale = [n](int k) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); };
    std::vector<double> cols(static_cast<size_t>(n) * n), out(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int v = 0; v < n; ++v) {
            double acc = 0.0;
            for (int y = 0; y < n; ++y)
                acc += block[static_cast<size_t>(y) * n + x] *
                       std::cos(std::numbers::pi * (2 * y + 1) * v / (2.0 * n));
            cols[static_cast<size_t>(v) * n + x] = scale(v) * acc;
        }
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
            double acc = 0.0;
            for (int x = 0; x < n; ++x)
                acc += cols[static_cast<size_t>(v) * n + x] *
                       std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n));
            out[static_cast<size_t>(v) * n + u] = scale(u) * acc;
        }
    return out;
}

// Tiles the inverse transform of a one-hot spectrum across a plane, so every
// tile carries exactly that one coefficient.
inline vdm::Plane one_hot_grating(vdm::DirectionalMode mode, int block_size, int j, int p,
                                  float coeff, int tiles_x, int tiles_y) {
    vdm::BlockSpectrum s;
    s.mode = mode;
    s.block_size = block_size;
    vdm::DirectionalTransform t(mode, block_size);
    s.groups.resize(t.group_count());
    for (int g = 0; g < t.group_count(); ++g) s.groups[g].assign(t.group_length(g), 0.0f);
    s.groups[j][p] = coeff;
    const std::vector<float> tile = vdm::inverse_ddct(s);

    vdm::Plane out(tiles_x * block_size, tiles_y * block_size);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = tile[static_cast<size_t>(y % block_size) * block_size + (x % block_size)];
    return out;
}

inline vdm::Plane random_plane(int w, int h, std::mt19937& rng, float lo = 0.0f, float hi = 1.0f) {
    vdm::Plane p(w, h);
    for (auto& v : p.data) v = lo + (hi - lo) * (rng() / 4294967296.0f);
    return p;
}

inline vdm::Frame random_frame(int w, int h, std::mt19937& rng) {
    vdm::Frame f;
    for (int c = 0; c < 3; ++c) f.ch[c] = random_plane(w, h, rng);
    return f;
}

// Unique scratch directory under the build tree, wiped on construction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::vector<char> slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace testsupport
