#include "vdm/align.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "vdm/fft.hpp"

namespace vdm {

namespace {

// Correlation surfaces this flat in total spectral magnitude are degenerate.
constexpr double kSpectrumEps = 1e-12;

double parabolic_offset(double left, double center, double right) {
    const double denom = left - 2.0 * center + right;
    if (std::abs(denom) < 1e-12) return 0.0;
    const double off = 0.5 * (left - right) / denom;
    return std::clamp(off, -0.5, 0.5);
}

int wrap_signed(int idx, int n) { return idx > n / 2 ? idx - n : idx; }

Plane box_downsample2(const Plane& p) {
    const int w = p.width / 2, h = p.height / 2;
    Plane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = 0.25f * (p.at(2 * x, 2 * y) + p.at(2 * x + 1, 2 * y) +
                                    p.at(2 * x, 2 * y + 1) + p.at(2 * x + 1, 2 * y + 1));
    return out;
}

float sample_replicate(const Plane& p, double x, double y) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    const double tx = x - x0;
    const double ty = y - y0;
    const int x1 = std::clamp(x0 + 1, 0, p.width - 1);
    const int y1 = std::clamp(y0 + 1, 0, p.height - 1);
    x0 = std::clamp(x0, 0, p.width - 1);
    y0 = std::clamp(y0, 0, p.height - 1);
    const double top = p.at(x0, y0) * (1.0 - tx) + p.at(x1, y0) * tx;
    const double bot = p.at(x0, y1) * (1.0 - tx) + p.at(x1, y1) * tx;
    return static_cast<float>(top * (1.0 - ty) + bot * ty);
}

Plane extract_patch(const Plane& p, int x0, int y0, int size) {
    Plane out(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            out.at(x, y) = p.at(std::clamp(x0 + x, 0, p.width - 1), std::clamp(y0 + y, 0, p.height - 1));
    return out;
}

// Normalized cross-power correlation surface with subpixel peak pick. When a
// prior is given the argmax is restricted to a window around it (circular
// distance), so coarse estimates steer finer levels without any resampling.
ShiftEstimate correlate_impl(const Plane& ref, const Plane& mov, bool windowed, double prior_dx,
                             double prior_dy, double window) {
    if (!ref.same_size(mov)) throw std::invalid_argument("phase_correlate: dimension mismatch");
    if (ref.width < 16 || ref.height < 16)
        throw std::invalid_argument("phase_correlate: planes must be at least 16x16");

    const int w = ref.width, h = ref.height;
    const size_t n = static_cast<size_t>(w) * h;
    std::vector<std::complex<double>> fr(n), fm(n);
    for (size_t i = 0; i < n; ++i) {
        fr[i] = ref.data[i];
        fm[i] = mov.data[i];
    }
    fft_2d(fr, w, h, false);
    fft_2d(fm, w, h, false);

    // A circular shift of ref by d puts the peak of IFFT(F_mov * conj(F_ref) / |.|) at d.
    double total_mag = 0.0;
    for (size_t i = 0; i < n; ++i) {
        std::complex<double> c = fm[i] * std::conj(fr[i]);
        const double mag = std::abs(c);
        if (i != 0) total_mag += mag;
        fr[i] = mag > kSpectrumEps ? c / mag : std::complex<double>(0.0, 0.0);
    }
    if (total_mag < kSpectrumEps) return {0.0, 0.0, 0.0};  // constant planes: flagged low confidence

    fft_2d(fr, w, h, true);

    auto circ_dist = [](double a, double b, int size) {
        double d = std::fmod(a - b, size);
        if (d > size / 2.0) d -= size;
        if (d < -size / 2.0) d += size;
        return std::abs(d);
    };
    int px = 0, py = 0;
    double peak = -2.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (windowed && (circ_dist(wrap_signed(x, w), prior_dx, w) > window ||
                             circ_dist(wrap_signed(y, h), prior_dy, h) > window))
                continue;
            const double v = fr[static_cast<size_t>(y) * w + x].real();
            if (v > peak) {
                peak = v;
                px = x;
                py = y;
            }
        }
    }

    auto surf = [&](int x, int y) {
        x = (x % w + w) % w;
        y = (y % h + h) % h;
        return fr[static_cast<size_t>(y) * w + x].real();
    };
    // Parabolic refinement only where the peak genuinely spreads into a
    // neighbor; an integer shift leaves neighbors near zero and refining
    // there just adds noise.
    auto refine = [&](double left, double right) {
        if (std::max(left, right) < 0.15 * peak) return 0.0;
        return parabolic_offset(left, peak, right);
    };
    const double offx = refine(surf(px - 1, py), surf(px + 1, py));
    const double offy = refine(surf(px, py - 1), surf(px, py + 1));

    ShiftEstimate est;
    est.dx = wrap_signed(px, w) + offx;
    est.dy = wrap_signed(py, h) + offy;
    est.confidence = peak;
    return est;
}

}  // namespace

ShiftEstimate phase_correlate(const Plane& ref, const Plane& mov) {
    return correlate_impl(ref, mov, false, 0.0, 0.0, 0.0);
}

AlignmentField identity_field(int frame_width, int frame_height, int tile_size) {
    AlignmentField f;
    f.tile_size = tile_size;
    f.frame_width = frame_width;
    f.frame_height = frame_height;
    f.grid_w = (frame_width + tile_size - 1) / tile_size;
    f.grid_h = (frame_height + tile_size - 1) / tile_size;
    f.shifts.assign(static_cast<size_t>(f.grid_w) * f.grid_h, ShiftEstimate{0.0, 0.0, 1.0});
    return f;
}

ShiftEstimate global_align(const Plane& ref_luma, const Plane& mov_luma, int levels) {
    if (levels < 1) throw std::invalid_argument("global_align: levels must be >= 1");

    std::vector<Plane> pr{ref_luma}, pm{mov_luma};
    for (int l = 1; l < levels; ++l) {
        if (pr.back().width / 2 < 16 || pr.back().height / 2 < 16)
            throw std::invalid_argument("global_align: pyramid too deep");
        pr.push_back(box_downsample2(pr.back()));
        pm.push_back(box_downsample2(pm.back()));
    }

    // Coarsest level searches everywhere; finer levels re-correlate at full
    // surface resolution with the doubled estimate as a prior window.
    ShiftEstimate global = phase_correlate(pr.back(), pm.back());
    for (int l = static_cast<int>(pr.size()) - 2; l >= 0; --l) {
        const ShiftEstimate refined =
            correlate_impl(pr[l], pm[l], true, 2.0 * global.dx, 2.0 * global.dy, 3.0);
        if (!refined.low_confidence()) {
            global = refined;
        } else {
            global.dx *= 2.0;
            global.dy *= 2.0;
        }
    }
    return global;
}

AlignmentField pyramid_align(const Frame& ref, const Frame& mov, int levels, int tile_size,
                             int search_radius) {
    if (tile_size < 16) throw std::invalid_argument("pyramid_align: tile_size must be >= 16");
    if (!ref.same_size(mov)) throw std::invalid_argument("pyramid_align: dimension mismatch");

    const Plane ref_luma = to_luma(ref);
    const Plane mov_luma = to_luma(mov);
    const ShiftEstimate global = global_align(ref_luma, mov_luma, levels);
    // Integer part of the global shift is absorbed by where the moving patch
    // is cut out; the correlation only has to resolve the remainder.
    const int gx = static_cast<int>(std::lround(global.dx));
    const int gy = static_cast<int>(std::lround(global.dy));

    AlignmentField field = identity_field(ref.width(), ref.height(), tile_size);
    for (int ty = 0; ty < field.grid_h; ++ty) {
        for (int tx = 0; tx < field.grid_w; ++tx) {
            const int x0 = std::min(tx * tile_size, std::max(0, ref_luma.width - tile_size));
            const int y0 = std::min(ty * tile_size, std::max(0, ref_luma.height - tile_size));
            const Plane pr = extract_patch(ref_luma, x0, y0, tile_size);
            const Plane pm = extract_patch(mov_luma, x0 + gx, y0 + gy, tile_size);
            const ShiftEstimate res = phase_correlate(pr, pm);
            const bool usable = !res.low_confidence() && std::abs(res.dx) <= search_radius &&
                                std::abs(res.dy) <= search_radius;
            ShiftEstimate& out = field.at(tx, ty);
            out.dx = usable ? gx + res.dx : global.dx;
            out.dy = usable ? gy + res.dy : global.dy;
            out.confidence = usable ? res.confidence : global.confidence;
        }
    }
    return field;
}

namespace {

// Per-pixel shift: bilinear interpolation of the tile grid with shifts
// anchored at nominal tile centers.
void pixel_shift(const AlignmentField& f, int x, int y, double& dx, double& dy) {
    const double gx = (x + 0.5) / f.tile_size - 0.5;
    const double gy = (y + 0.5) / f.tile_size - 0.5;
    int tx0 = static_cast<int>(std::floor(gx));
    int ty0 = static_cast<int>(std::floor(gy));
    const double ax = gx - tx0;
    const double ay = gy - ty0;
    const int tx1 = std::clamp(tx0 + 1, 0, f.grid_w - 1);
    const int ty1 = std::clamp(ty0 + 1, 0, f.grid_h - 1);
    tx0 = std::clamp(tx0, 0, f.grid_w - 1);
    ty0 = std::clamp(ty0, 0, f.grid_h - 1);

    const ShiftEstimate& s00 = f.at(tx0, ty0);
    const ShiftEstimate& s10 = f.at(tx1, ty0);
    const ShiftEstimate& s01 = f.at(tx0, ty1);
    const ShiftEstimate& s11 = f.at(tx1, ty1);
    dx = (s00.dx * (1 - ax) + s10.dx * ax) * (1 - ay) + (s01.dx * (1 - ax) + s11.dx * ax) * ay;
    dy = (s00.dy * (1 - ax) + s10.dy * ax) * (1 - ay) + (s01.dy * (1 - ax) + s11.dy * ax) * ay;
}

}  // namespace

Plane warp(const Plane& plane, const AlignmentField& field) {
    if (plane.width != field.frame_width || plane.height != field.frame_height)
        throw std::invalid_argument("warp: field does not match plane dimensions");
    Plane out(plane.width, plane.height);
    for (int y = 0; y < plane.height; ++y) {
        for (int x = 0; x < plane.width; ++x) {
            double dx, dy;
            pixel_shift(field, x, y, dx, dy);
            out.at(x, y) = sample_replicate(plane, x + dx, y + dy);
        }
    }
    return out;
}

Frame warp(const Frame& frame, const AlignmentField& field) {
    Frame out;
    for (int c = 0; c < 3; ++c) out.ch[c] = warp(frame.ch[c], field);
    return out;
}

void dump_field(const AlignmentField& field, std::ostream& out) {
    for (int ty = 0; ty < field.grid_h; ++ty)
        for (int tx = 0; tx < field.grid_w; ++tx) {
            const ShiftEstimate& s = field.at(tx, ty);
            out << tx << " " << ty << " " << s.dx << " " << s.dy << " " << s.confidence << "\n";
        }
}

}  // namespace vdm
