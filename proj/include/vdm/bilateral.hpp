#pragma once

#include <array>
#include <string>
#include <vector>

#include "vdm/image.hpp"

namespace vdm {

struct GridDims {
    int x = 16;
    int y = 16;
    int z = 16;

    bool operator==(const GridDims&) const = default;
};

/// Per-cell affine transform: per-channel scale and bias.
struct CellAffine {
    std::array<float, 3> scale{1.0f, 1.0f, 1.0f};
    std::array<float, 3> bias{0.0f, 0.0f, 0.0f};
};

/// 3-D grid over (x, y, guidance intensity) holding per-cell affine color
/// transforms. Cells are stored x-major, then y, then z.
struct BilateralGrid {
    GridDims dims;
    std::vector<CellAffine> cells;

    size_t index(int ix, int iy, int iz) const {
        return (static_cast<size_t>(ix) * dims.y + iy) * dims.z + iz;
    }
    CellAffine& at(int ix, int iy, int iz) { return cells[index(ix, iy, iz)]; }
    const CellAffine& at(int ix, int iy, int iz) const { return cells[index(ix, iy, iz)]; }
};

BilateralGrid identity_grid(GridDims dims = {});

/// Single-channel grid lookup key in [0,1], tagged with its timestamp offset.
struct GuidanceMap {
    Plane plane;
    int timestamp = 0;  // -1, 0, +1
};

/// Luma of the (aligned) frame, clamped to [0,1].
GuidanceMap guidance_map(const Frame& frame, int timestamp = 0);

enum class SliceInterp { kNearest, kTrilinear };

SliceInterp parse_interp(const std::string& name);
const char* interp_name(SliceInterp interp);

/// Per-pixel affine parameters looked up from a grid.
struct SlicedAffine {
    int width = 0;
    int height = 0;
    std::vector<std::array<float, 3>> scale;
    std::vector<std::array<float, 3>> bias;
};

/// Nearest mode applies the floor rule (x/W*Gx, y/H*Gy, g*Gz, floored, each
/// clamped to the valid range); trilinear interpolates with cell centers at
/// (i+0.5)/dim.
SlicedAffine slice_grid(const BilateralGrid& grid, const GuidanceMap& guidance, SliceInterp interp);

/// Nearest-mode cell index for pixel (x, y) with guidance g, exposed so
/// callers can reason about occupancy.
void nearest_cell(const GridDims& dims, int img_w, int img_h, int x, int y, float g, int& ix,
                  int& iy, int& iz);

/// Regularized per-cell least squares mapping source to target:
/// min (w s + b - t)^2 + ridge ((w-1)^2 + b^2) per cell and channel. Cells
/// with no pixels stay at (1, 0).
BilateralGrid fit_grid(const Frame& source, const Frame& target, const GuidanceMap& guidance,
                       double ridge, GridDims dims = {});

/// clamp(mean(W) * intermediate + mean(B)) across the three sliced fields.
Frame apply_affine(const Frame& intermediate, const std::array<SlicedAffine, 3>& sliced);

/// Full refinement stage: intermediate = mean of the aligned frames,
/// per-timestamp guidance and slicing, then the fused affine transform.
Frame tdr(const Clip& aligned, const BilateralGrid& grid, SliceInterp interp);

/// Binary grid file: magic "BGRD", three u32 little-endian dims, then cells
/// x-major, each 6 IEEE-754 f32 (scaleR,G,B, biasR,G,B).
void save_grid(const BilateralGrid& grid, const std::string& path);
BilateralGrid load_grid(const std::string& path);

}  // namespace vdm
