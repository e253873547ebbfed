#pragma once

#include <iosfwd>
#include <vector>

#include "vdm/image.hpp"

namespace vdm {

/// Subpixel translation plus the correlation peak that produced it.
/// Confidence below kLowConfidence marks a degenerate estimate.
struct ShiftEstimate {
    double dx = 0.0;
    double dy = 0.0;
    double confidence = 0.0;

    static constexpr double kLowConfidence = 0.1;
    bool low_confidence() const { return confidence < kLowConfidence; }
};

/// Global translation estimate via the normalized cross-power spectrum with
/// parabolic subpixel refinement. Sign convention: warping mov by the
/// returned shift best matches ref; a circular shift of ref by (dx,dy) is
/// recovered as (dx,dy).
ShiftEstimate phase_correlate(const Plane& ref, const Plane& mov);

/// Per-tile displacement grid; grid dims are ceil(frame / tile_size).
struct AlignmentField {
    int tile_size = 0;
    int frame_width = 0;
    int frame_height = 0;
    int grid_w = 0;
    int grid_h = 0;
    std::vector<ShiftEstimate> shifts;  // row-major grid

    ShiftEstimate& at(int tx, int ty) { return shifts[static_cast<size_t>(ty) * grid_w + tx]; }
    const ShiftEstimate& at(int tx, int ty) const { return shifts[static_cast<size_t>(ty) * grid_w + tx]; }
};

AlignmentField identity_field(int frame_width, int frame_height, int tile_size);

/// Coarse global shift from factor-2 luma pyramids, refined level by level.
ShiftEstimate global_align(const Plane& ref_luma, const Plane& mov_luma, int levels);

/// Coarse-to-fine alignment: global pyramid phase correlation, then per-tile
/// refinement within +-search_radius of the global shift. Low-confidence
/// tiles inherit the global shift.
AlignmentField pyramid_align(const Frame& ref, const Frame& mov, int levels, int tile_size,
                             int search_radius);

/// Samples the frame at (x + dx, y + dy) with bilinear interpolation and
/// border replicate; per-pixel shifts are bilinearly interpolated from the
/// tile grid, anchored at tile centers.
Frame warp(const Frame& frame, const AlignmentField& field);
Plane warp(const Plane& plane, const AlignmentField& field);

/// Debug dump: one "tile_x tile_y dx dy confidence" row per tile.
void dump_field(const AlignmentField& field, std::ostream& out);

}  // namespace vdm
