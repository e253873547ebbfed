#include "vdm/bilateral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vdm {

namespace {

void validate_dims(const GridDims& d) {
    for (int v : {d.x, d.y, d.z})
        if (v != 8 && v != 16 && v != 32)
            throw std::invalid_argument("BilateralGrid: dims must be powers of two in [8,32]");
}

}  // namespace

BilateralGrid identity_grid(GridDims dims) {
    validate_dims(dims);
    BilateralGrid g;
    g.dims = dims;
    g.cells.assign(static_cast<size_t>(dims.x) * dims.y * dims.z, CellAffine{});
    return g;
}

GuidanceMap guidance_map(const Frame& frame, int timestamp) {
    return {to_luma(frame), timestamp};
}

SliceInterp parse_interp(const std::string& name) {
    if (name == "nearest") return SliceInterp::kNearest;
    if (name == "trilinear") return SliceInterp::kTrilinear;
    throw std::invalid_argument("unknown interpolation: " + name);
}

const char* interp_name(SliceInterp interp) {
    return interp == SliceInterp::kNearest ? "nearest" : "trilinear";
}

void nearest_cell(const GridDims& dims, int img_w, int img_h, int x, int y, float g, int& ix,
                  int& iy, int& iz) {
    ix = std::clamp(static_cast<int>(std::floor(static_cast<double>(x) / img_w * dims.x)), 0, dims.x - 1);
    iy = std::clamp(static_cast<int>(std::floor(static_cast<double>(y) / img_h * dims.y)), 0, dims.y - 1);
    iz = std::clamp(static_cast<int>(std::floor(static_cast<double>(g) * dims.z)), 0, dims.z - 1);
}

SlicedAffine slice_grid(const BilateralGrid& grid, const GuidanceMap& guidance, SliceInterp interp) {
    const Plane& g = guidance.plane;
    SlicedAffine out;
    out.width = g.width;
    out.height = g.height;
    out.scale.resize(g.pixel_count());
    out.bias.resize(g.pixel_count());

    const GridDims& d = grid.dims;
    if (interp == SliceInterp::kNearest) {
        for (int y = 0; y < g.height; ++y) {
            for (int x = 0; x < g.width; ++x) {
                int ix, iy, iz;
                nearest_cell(d, g.width, g.height, x, y, g.at(x, y), ix, iy, iz);
                const CellAffine& cell = grid.at(ix, iy, iz);
                const size_t i = static_cast<size_t>(y) * g.width + x;
                out.scale[i] = cell.scale;
                out.bias[i] = cell.bias;
            }
        }
        return out;
    }

    // Trilinear: cell centers at (i + 0.5) / dim along each axis.
    auto axis = [](double t, int dim, int& i0, int& i1, double& frac) {
        const double gc = t * dim - 0.5;
        const int base = static_cast<int>(std::floor(gc));
        frac = gc - base;
        i0 = std::clamp(base, 0, dim - 1);
        i1 = std::clamp(base + 1, 0, dim - 1);
    };
    for (int y = 0; y < g.height; ++y) {
        int iy0, iy1;
        double fy;
        axis((y + 0.5) / g.height, d.y, iy0, iy1, fy);
        for (int x = 0; x < g.width; ++x) {
            int ix0, ix1, iz0, iz1;
            double fx, fz;
            axis((x + 0.5) / g.width, d.x, ix0, ix1, fx);
            axis(static_cast<double>(g.at(x, y)), d.z, iz0, iz1, fz);

            const size_t i = static_cast<size_t>(y) * g.width + x;
            std::array<double, 3> sc{0, 0, 0}, bi{0, 0, 0};
            for (int cx = 0; cx < 2; ++cx) {
                const double wx = cx ? fx : 1.0 - fx;
                const int ix = cx ? ix1 : ix0;
                for (int cy = 0; cy < 2; ++cy) {
                    const double wy = cy ? fy : 1.0 - fy;
                    const int iy = cy ? iy1 : iy0;
                    for (int cz = 0; cz < 2; ++cz) {
                        const double w = wx * wy * (cz ? fz : 1.0 - fz);
                        const CellAffine& cell = grid.at(ix, iy, cz ? iz1 : iz0);
                        for (int c = 0; c < 3; ++c) {
                            sc[c] += w * cell.scale[c];
                            bi[c] += w * cell.bias[c];
                        }
                    }
                }
            }
            for (int c = 0; c < 3; ++c) {
                out.scale[i][c] = static_cast<float>(sc[c]);
                out.bias[i][c] = static_cast<float>(bi[c]);
            }
        }
    }
    return out;
}

BilateralGrid fit_grid(const Frame& source, const Frame& target, const GuidanceMap& guidance,
                       double ridge, GridDims dims) {
    validate_dims(dims);
    if (!source.same_size(target) || !source.ch[0].same_size(guidance.plane))
        throw std::invalid_argument("fit_grid: source/target/guidance dimensions differ");
    if (ridge < 0.0) throw std::invalid_argument("fit_grid: ridge must be >= 0");
    for (const Frame* f : {&source, &target})
        for (const Plane& p : f->ch)
            for (float v : p.data)
                if (!std::isfinite(v)) throw std::invalid_argument("fit_grid: non-finite input");

    const size_t cell_count = static_cast<size_t>(dims.x) * dims.y * dims.z;
    // Per-cell, per-channel accumulators for the 2x2 normal equations.
    struct Acc {
        double n = 0, s = 0, ss = 0, t = 0, st = 0;
    };
    std::vector<std::array<Acc, 3>> acc(cell_count);

    const int w = source.width(), h = source.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int ix, iy, iz;
            nearest_cell(dims, w, h, x, y, guidance.plane.at(x, y), ix, iy, iz);
            const size_t ci = (static_cast<size_t>(ix) * dims.y + iy) * dims.z + iz;
            for (int c = 0; c < 3; ++c) {
                const double s = source.ch[c].at(x, y);
                const double t = target.ch[c].at(x, y);
                Acc& a = acc[ci][c];
                a.n += 1.0;
                a.s += s;
                a.ss += s * s;
                a.t += t;
                a.st += s * t;
            }
        }
    }

    BilateralGrid grid = identity_grid(dims);
    for (size_t ci = 0; ci < cell_count; ++ci) {
        for (int c = 0; c < 3; ++c) {
            const Acc& a = acc[ci][c];
            if (a.n == 0.0) continue;  // empty cell keeps (1, 0)
            const double a11 = a.ss + ridge, a12 = a.s;
            const double a22 = a.n + ridge;
            const double b1 = a.st + ridge, b2 = a.t;
            const double det = a11 * a22 - a12 * a12;
            if (std::abs(det) < 1e-12) continue;
            grid.cells[ci].scale[c] = static_cast<float>((b1 * a22 - b2 * a12) / det);
            grid.cells[ci].bias[c] = static_cast<float>((a11 * b2 - a12 * b1) / det);
        }
    }
    return grid;
}

Frame apply_affine(const Frame& intermediate, const std::array<SlicedAffine, 3>& sliced) {
    const int w = intermediate.width(), h = intermediate.height();
    for (const SlicedAffine& s : sliced)
        if (s.width != w || s.height != h)
            throw std::invalid_argument("apply_affine: sliced dimensions mismatch");

    Frame out(w, h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double ws = (sliced[0].scale[i][c] + sliced[1].scale[i][c] + sliced[2].scale[i][c]) / 3.0;
            const double bs = (sliced[0].bias[i][c] + sliced[1].bias[i][c] + sliced[2].bias[i][c]) / 3.0;
            out.ch[c].data[i] = clamp01(static_cast<float>(ws * intermediate.ch[c].data[i] + bs));
        }
    }
    return out;
}

Frame tdr(const Clip& aligned, const BilateralGrid& grid, SliceInterp interp) {
    const int w = aligned.width(), h = aligned.height();
    Frame intermediate(w, h);
    for (int c = 0; c < 3; ++c) {
        Plane& dst = intermediate.ch[c];
        for (size_t i = 0; i < dst.pixel_count(); ++i)
            dst.data[i] = clamp01((aligned.frames[0].ch[c].data[i] + aligned.frames[1].ch[c].data[i] +
                                   aligned.frames[2].ch[c].data[i]) /
                                  3.0f);
    }

    std::array<SlicedAffine, 3> sliced;
    for (int k = 0; k < 3; ++k)
        sliced[k] = slice_grid(grid, guidance_map(aligned.frames[k], k - 1), interp);
    return apply_affine(intermediate, sliced);
}

namespace {

void put_u32(std::ostream& out, uint32_t v) {
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v & 0xff),
                                         static_cast<unsigned char>((v >> 8) & 0xff),
                                         static_cast<unsigned char>((v >> 16) & 0xff),
                                         static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }
float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

}  // namespace

void save_grid(const BilateralGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_grid: cannot open " + path);
    f.write("BGRD", 4);
    put_u32(f, static_cast<uint32_t>(grid.dims.x));
    put_u32(f, static_cast<uint32_t>(grid.dims.y));
    put_u32(f, static_cast<uint32_t>(grid.dims.z));
    for (const CellAffine& cell : grid.cells) {
        for (float v : cell.scale) put_f32(f, v);
        for (float v : cell.bias) put_f32(f, v);
    }
    if (!f) throw std::runtime_error("save_grid: write failed for " + path);
}

BilateralGrid load_grid(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_grid: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "BGRD", 4) != 0)
        throw std::runtime_error("load_grid: bad magic in " + path);
    GridDims dims;
    dims.x = static_cast<int>(get_u32(f));
    dims.y = static_cast<int>(get_u32(f));
    dims.z = static_cast<int>(get_u32(f));
    validate_dims(dims);
    BilateralGrid grid = identity_grid(dims);
    for (CellAffine& cell : grid.cells) {
        for (float& v : cell.scale) v = get_f32(f);
        for (float& v : cell.bias) v = get_f32(f);
    }
    if (!f) throw std::runtime_error("load_grid: truncated file " + path);
    for (const CellAffine& cell : grid.cells)
        for (int c = 0; c < 3; ++c)
            if (!std::isfinite(cell.scale[c]) || !std::isfinite(cell.bias[c]))
                throw std::runtime_error("load_grid: non-finite cell in " + path);
    return grid;
}

}  // namespace vdm
