#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vdm {

/// Row-major single-channel raster, 32-bit float samples.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    Plane() = default;
    Plane(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

    float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return data.size(); }
    bool same_size(const Plane& o) const { return width == o.width && height == o.height; }
};

/// RGB frame; channel values live in [0,1].
struct Frame {
    std::array<Plane, 3> ch;

    Frame() = default;
    Frame(int w, int h, float fill = 0.0f) : ch{Plane(w, h, fill), Plane(w, h, fill), Plane(w, h, fill)} {}

    int width() const { return ch[0].width; }
    int height() const { return ch[0].height; }
    bool same_size(const Frame& o) const { return ch[0].same_size(o.ch[0]); }
};

/// Ordered three-frame window {t-1, t, t+1}; index 1 is the reference.
struct Clip {
    std::array<Frame, 3> frames;

    static constexpr int kReference = 1;
    const Frame& reference() const { return frames[kReference]; }
    int width() const { return frames[0].width(); }
    int height() const { return frames[0].height(); }
};

inline float clamp01(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
Plane to_luma(const Frame& frame);

/// Bilinear resize with half-pixel-center coordinates and border replicate.
/// Equal dimensions return a bitwise-equal copy.
Frame resize_bilinear(const Frame& frame, int out_w, int out_h);
Plane resize_bilinear(const Plane& plane, int out_w, int out_h);

struct PaddedPlane {
    Plane plane;
    int orig_width = 0;
    int orig_height = 0;
};

/// Edge-replicate pad on the right/bottom up to the next multiple of `block`.
PaddedPlane pad_to_block_multiple(const Plane& plane, int block);

/// Crop back to the size recorded by pad_to_block_multiple.
Plane crop(const Plane& plane, int width, int height);

/// Integer circular shift; content moves right by dx and down by dy.
Plane circular_shift(const Plane& plane, int dx, int dy);
Frame circular_shift(const Frame& frame, int dx, int dy);

Frame clamp_frame(Frame frame);

double mean_abs_diff(const Plane& a, const Plane& b);

}  // namespace vdm
