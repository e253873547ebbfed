#include "vdm/dct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "vdm/filter.hpp"

namespace vdm {

const char* mode_name(DirectionalMode mode) {
    switch (mode) {
        case DirectionalMode::V: return "V";
        case DirectionalMode::H: return "H";
        case DirectionalMode::DDL: return "DDL";
        case DirectionalMode::DDR: return "DDR";
        case DirectionalMode::VR: return "VR";
        case DirectionalMode::HD: return "HD";
        case DirectionalMode::VL: return "VL";
        case DirectionalMode::HU: return "HU";
    }
    return "?";
}

std::optional<DirectionalMode> parse_mode(std::string_view name) {
    for (DirectionalMode m : kAllModes)
        if (name == mode_name(m)) return m;
    return std::nullopt;
}

int mode_index(DirectionalMode mode) {
    for (size_t i = 0; i < kAllModes.size(); ++i)
        if (kAllModes[i] == mode) return static_cast<int>(i);
    throw std::invalid_argument("mode_index: unknown mode");
}

namespace {

// Line index of pixel (r, c) for each mode, offset to be nonnegative.
int line_index(DirectionalMode mode, int r, int c, int n) {
    switch (mode) {
        case DirectionalMode::V: return c;
        case DirectionalMode::H: return r;
        case DirectionalMode::DDL: return r + c;
        case DirectionalMode::DDR: return r - c + (n - 1);
        case DirectionalMode::VR: return 2 * c - r + (n - 1);
        case DirectionalMode::HD: return 2 * r - c + (n - 1);
        case DirectionalMode::VL: return 2 * c + r;
        case DirectionalMode::HU: return 2 * r + c;
    }
    throw std::invalid_argument("line_index: unknown mode");
}

// Orthonormal DCT-II basis of length len, row-major: B[k*len + i].
std::vector<double> dct_basis(int len) {
    std::vector<double> b(static_cast<size_t>(len) * len);
    const double s0 = std::sqrt(1.0 / len);
    const double sk = std::sqrt(2.0 / len);
    for (int k = 0; k < len; ++k) {
        const double scale = k == 0 ? s0 : sk;
        for (int i = 0; i < len; ++i)
            b[static_cast<size_t>(k) * len + i] =
                scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * len));
    }
    return b;
}

}  // namespace

LinePartition line_partition(DirectionalMode mode, int block_size) {
    if (block_size < 2) throw std::invalid_argument("line_partition: block_size must be >= 2");
    // Collect pixels per line index; raster order already gives ascending
    // row with ties by ascending column.
    std::map<int, std::vector<std::pair<int, int>>> by_index;
    for (int r = 0; r < block_size; ++r)
        for (int c = 0; c < block_size; ++c) by_index[line_index(mode, r, c, block_size)].emplace_back(r, c);

    LinePartition part;
    part.block_size = block_size;
    part.lines.reserve(by_index.size());
    for (auto& [idx, pixels] : by_index) part.lines.push_back(std::move(pixels));
    return part;
}

DirectionalTransform::DirectionalTransform(DirectionalMode mode, int block_size)
    : mode_(mode), n_(block_size), partition_(line_partition(mode, block_size)) {
    const int line_count = static_cast<int>(partition_.lines.size());
    line_pixels_.resize(line_count);
    int max_len = 0;
    for (int i = 0; i < line_count; ++i) {
        for (auto [r, c] : partition_.lines[i]) line_pixels_[i].push_back(r * n_ + c);
        max_len = std::max(max_len, static_cast<int>(line_pixels_[i].size()));
    }

    group_lines_.resize(max_len);
    group_lengths_.resize(max_len);
    group_offsets_.resize(max_len);
    int offset = 0;
    for (int j = 0; j < max_len; ++j) {
        for (int i = 0; i < line_count; ++i)
            if (static_cast<int>(line_pixels_[i].size()) > j) group_lines_[j].push_back(i);
        group_lengths_[j] = static_cast<int>(group_lines_[j].size());
        group_offsets_[j] = offset;
        offset += group_lengths_[j];
    }
    if (offset != n_ * n_) throw std::logic_error("DirectionalTransform: partition does not cover block");

    int max_basis = std::max(max_len, *std::max_element(group_lengths_.begin(), group_lengths_.end()));
    bases_.resize(max_basis + 1);
    for (const auto& px : line_pixels_)
        if (bases_[px.size()].empty()) bases_[px.size()] = dct_basis(static_cast<int>(px.size()));
    for (int len : group_lengths_)
        if (bases_[len].empty()) bases_[len] = dct_basis(len);

    std::vector<double> ones(static_cast<size_t>(n_) * n_, 1.0), response(coeff_count());
    Workspace ws;
    forward(ones.data(), response.data(), ws);
    dc_like_.resize(coeff_count());
    for (int i = 0; i < coeff_count(); ++i) dc_like_[i] = std::abs(response[i]) > 1e-9 * n_;
}

void DirectionalTransform::forward(const double* block, double* coeffs, Workspace& ws) const {
    const int line_count = static_cast<int>(line_pixels_.size());
    ws.line_coeffs.resize(static_cast<size_t>(line_count) * n_);
    ws.gather.resize(static_cast<size_t>(n_) * n_);
    ws.result.resize(static_cast<size_t>(n_) * n_);

    // Stage 1: DCT along each oriented line.
    for (int i = 0; i < line_count; ++i) {
        const auto& px = line_pixels_[i];
        const int len = static_cast<int>(px.size());
        const double* b = basis(len);
        for (int idx = 0; idx < len; ++idx) ws.gather[idx] = block[px[idx]];
        double* out = &ws.line_coeffs[static_cast<size_t>(i) * n_];
        for (int k = 0; k < len; ++k) {
            double acc = 0.0;
            const double* row = b + static_cast<size_t>(k) * len;
            for (int idx = 0; idx < len; ++idx) acc += row[idx] * ws.gather[idx];
            out[k] = acc;
        }
    }

    // Stage 2: DCT across lines at each first-stage frequency.
    for (int j = 0; j < group_count(); ++j) {
        const auto& lines = group_lines_[j];
        const int len = group_lengths_[j];
        const double* b = basis(len);
        for (int p = 0; p < len; ++p) ws.gather[p] = ws.line_coeffs[static_cast<size_t>(lines[p]) * n_ + j];
        double* out = coeffs + group_offsets_[j];
        for (int k = 0; k < len; ++k) {
            double acc = 0.0;
            const double* row = b + static_cast<size_t>(k) * len;
            for (int p = 0; p < len; ++p) acc += row[p] * ws.gather[p];
            out[k] = acc;
        }
    }
}

void DirectionalTransform::inverse(const double* coeffs, double* block, Workspace& ws) const {
    const int line_count = static_cast<int>(line_pixels_.size());
    ws.line_coeffs.resize(static_cast<size_t>(line_count) * n_);
    ws.gather.resize(static_cast<size_t>(n_) * n_);

    // Inverse stage 2: scatter back per-line stage-1 coefficients.
    for (int j = 0; j < group_count(); ++j) {
        const auto& lines = group_lines_[j];
        const int len = group_lengths_[j];
        const double* b = basis(len);
        const double* in = coeffs + group_offsets_[j];
        for (int p = 0; p < len; ++p) {
            double acc = 0.0;
            for (int k = 0; k < len; ++k) acc += b[static_cast<size_t>(k) * len + p] * in[k];
            ws.line_coeffs[static_cast<size_t>(lines[p]) * n_ + j] = acc;
        }
    }

    // Inverse stage 1: per-line inverse DCT back to pixels.
    for (int i = 0; i < line_count; ++i) {
        const auto& px = line_pixels_[i];
        const int len = static_cast<int>(px.size());
        const double* b = basis(len);
        const double* in = &ws.line_coeffs[static_cast<size_t>(i) * n_];
        for (int idx = 0; idx < len; ++idx) {
            double acc = 0.0;
            for (int k = 0; k < len; ++k) acc += b[static_cast<size_t>(k) * len + idx] * in[k];
            block[px[idx]] = acc;
        }
    }
}

BlockSpectrum DirectionalTransform::to_spectrum(const double* coeffs) const {
    BlockSpectrum s;
    s.mode = mode_;
    s.block_size = n_;
    s.groups.resize(group_count());
    for (int j = 0; j < group_count(); ++j) {
        s.groups[j].resize(group_lengths_[j]);
        for (int p = 0; p < group_lengths_[j]; ++p)
            s.groups[j][p] = static_cast<float>(coeffs[group_offsets_[j] + p]);
    }
    return s;
}

void DirectionalTransform::from_spectrum(const BlockSpectrum& spectrum, double* coeffs) const {
    if (spectrum.block_size != n_ || spectrum.mode != mode_ ||
        static_cast<int>(spectrum.groups.size()) != group_count())
        throw std::invalid_argument("from_spectrum: malformed spectrum shape");
    for (int j = 0; j < group_count(); ++j) {
        if (static_cast<int>(spectrum.groups[j].size()) != group_lengths_[j])
            throw std::invalid_argument("from_spectrum: malformed group length");
        for (int p = 0; p < group_lengths_[j]; ++p)
            coeffs[group_offsets_[j] + p] = spectrum.groups[j][p];
    }
}

std::vector<float> DirectionalTransform::flatten(const std::vector<std::vector<float>>& ragged) const {
    if (static_cast<int>(ragged.size()) != group_count())
        throw std::invalid_argument("flatten: group count mismatch");
    std::vector<float> flat(coeff_count());
    for (int j = 0; j < group_count(); ++j) {
        if (static_cast<int>(ragged[j].size()) != group_lengths_[j])
            throw std::invalid_argument("flatten: group length mismatch");
        std::copy(ragged[j].begin(), ragged[j].end(), flat.begin() + group_offsets_[j]);
    }
    return flat;
}

BlockSpectrum forward_ddct(const std::vector<float>& block, int block_size, DirectionalMode mode) {
    if (static_cast<int>(block.size()) != block_size * block_size)
        throw std::invalid_argument("forward_ddct: block dimension mismatch");
    DirectionalTransform t(mode, block_size);
    std::vector<double> in(block.begin(), block.end());
    std::vector<double> coeffs(t.coeff_count());
    DirectionalTransform::Workspace ws;
    t.forward(in.data(), coeffs.data(), ws);
    return t.to_spectrum(coeffs.data());
}

std::vector<float> inverse_ddct(const BlockSpectrum& spectrum) {
    DirectionalTransform t(spectrum.mode, spectrum.block_size);
    std::vector<double> coeffs(t.coeff_count());
    t.from_spectrum(spectrum, coeffs.data());
    std::vector<double> block(t.coeff_count());
    DirectionalTransform::Workspace ws;
    t.inverse(coeffs.data(), block.data(), ws);
    std::vector<float> out(block.size());
    for (size_t i = 0; i < block.size(); ++i) out[i] = static_cast<float>(block[i]);
    return out;
}

Plane block_apply(const Plane& plane, DirectionalMode mode, int block_size, const FilterMask* mask) {
    DirectionalTransform t(mode, block_size);
    std::vector<float> gains;
    if (mask) {
        if (mask->mode != mode || mask->block_size != block_size)
            throw std::invalid_argument("block_apply: mask does not match mode/block_size");
        gains = t.flatten(mask->gains);
    }

    PaddedPlane padded = pad_to_block_multiple(plane, block_size);
    Plane& p = padded.plane;
    const int n = block_size;
    const int cc = t.coeff_count();
    std::vector<double> block(cc), coeffs(cc);
    DirectionalTransform::Workspace ws;

    for (int by = 0; by < p.height; by += n) {
        for (int bx = 0; bx < p.width; bx += n) {
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) block[y * n + x] = p.at(bx + x, by + y);
            t.forward(block.data(), coeffs.data(), ws);
            if (mask)
                for (int i = 0; i < cc; ++i) coeffs[i] *= gains[i];
            t.inverse(coeffs.data(), block.data(), ws);
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) p.at(bx + x, by + y) = static_cast<float>(block[y * n + x]);
        }
    }
    return crop(p, padded.orig_width, padded.orig_height);
}

void for_each_tile_spectrum(const Plane& plane, const DirectionalTransform& transform,
                            const std::function<void(const double*)>& fn) {
    const int n = transform.block_size();
    PaddedPlane padded = pad_to_block_multiple(plane, n);
    const Plane& p = padded.plane;
    std::vector<double> block(transform.coeff_count()), coeffs(transform.coeff_count());
    DirectionalTransform::Workspace ws;
    for (int by = 0; by < p.height; by += n) {
        for (int bx = 0; bx < p.width; bx += n) {
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) block[y * n + x] = p.at(bx + x, by + y);
            transform.forward(block.data(), coeffs.data(), ws);
            fn(coeffs.data());
        }
    }
}

}  // namespace vdm
