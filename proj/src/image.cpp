#include "vdm/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vdm {

Plane to_luma(const Frame& frame) {
    Plane out(frame.width(), frame.height());
    const Plane& r = frame.ch[0];
    const Plane& g = frame.ch[1];
    const Plane& b = frame.ch[2];
    for (size_t i = 0; i < out.pixel_count(); ++i)
        out.data[i] = clamp01(0.299f * r.data[i] + 0.587f * g.data[i] + 0.114f * b.data[i]);
    return out;
}

Plane resize_bilinear(const Plane& plane, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw std::invalid_argument("resize_bilinear: target dimensions must be >= 1");
    if (out_w == plane.width && out_h == plane.height)
        return plane;

    Plane out(out_w, out_h);
    const double sx = static_cast<double>(plane.width) / out_w;
    const double sy = static_cast<double>(plane.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(src_y));
        const double ty = src_y - y0;
        const int y1 = std::clamp(y0 + 1, 0, plane.height - 1);
        y0 = std::clamp(y0, 0, plane.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(src_x));
            const double tx = src_x - x0;
            const int x1 = std::clamp(x0 + 1, 0, plane.width - 1);
            x0 = std::clamp(x0, 0, plane.width - 1);
            const double top = plane.at(x0, y0) * (1.0 - tx) + plane.at(x1, y0) * tx;
            const double bot = plane.at(x0, y1) * (1.0 - tx) + plane.at(x1, y1) * tx;
            out.at(x, y) = static_cast<float>(top * (1.0 - ty) + bot * ty);
        }
    }
    return out;
}

Frame resize_bilinear(const Frame& frame, int out_w, int out_h) {
    Frame out;
    for (int c = 0; c < 3; ++c) out.ch[c] = resize_bilinear(frame.ch[c], out_w, out_h);
    return out;
}

PaddedPlane pad_to_block_multiple(const Plane& plane, int block) {
    if (block < 1) throw std::invalid_argument("pad_to_block_multiple: block must be >= 1");
    PaddedPlane result;
    result.orig_width = plane.width;
    result.orig_height = plane.height;
    const int pw = ((plane.width + block - 1) / block) * block;
    const int ph = ((plane.height + block - 1) / block) * block;
    if (pw == plane.width && ph == plane.height) {
        result.plane = plane;
        return result;
    }
    Plane out(pw, ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::min(y, plane.height - 1);
        for (int x = 0; x < pw; ++x) {
            const int sx = std::min(x, plane.width - 1);
            out.at(x, y) = plane.at(sx, sy);
        }
    }
    result.plane = std::move(out);
    return result;
}

Plane crop(const Plane& plane, int width, int height) {
    if (width > plane.width || height > plane.height)
        throw std::invalid_argument("crop: target exceeds source size");
    if (width == plane.width && height == plane.height) return plane;
    Plane out(width, height);
    for (int y = 0; y < height; ++y)
        std::copy_n(&plane.data[static_cast<size_t>(y) * plane.width], width,
                    &out.data[static_cast<size_t>(y) * width]);
    return out;
}

Plane circular_shift(const Plane& plane, int dx, int dy) {
    Plane out(plane.width, plane.height);
    const int w = plane.width, h = plane.height;
    auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
    for (int y = 0; y < h; ++y) {
        const int sy = wrap(y - dy, h);
        for (int x = 0; x < w; ++x) out.at(x, y) = plane.at(wrap(x - dx, w), sy);
    }
    return out;
}

Frame circular_shift(const Frame& frame, int dx, int dy) {
    Frame out;
    for (int c = 0; c < 3; ++c) out.ch[c] = circular_shift(frame.ch[c], dx, dy);
    return out;
}

Frame clamp_frame(Frame frame) {
    for (auto& p : frame.ch)
        for (auto& v : p.data) v = clamp01(v);
    return frame;
}

double mean_abs_diff(const Plane& a, const Plane& b) {
    if (!a.same_size(b)) throw std::invalid_argument("mean_abs_diff: size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.pixel_count(); ++i) acc += std::abs(static_cast<double>(a.data[i]) - b.data[i]);
    return a.pixel_count() ? acc / static_cast<double>(a.pixel_count()) : 0.0;
}

}  // namespace vdm
