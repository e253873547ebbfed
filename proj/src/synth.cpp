#include "vdm/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vdm {

namespace {

double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

void validate(const MoireParams& p) {
    for (const GratingParams* g : {&p.grating1, &p.grating2}) {
        if (g->frequency < 0.0 || g->frequency > 0.5)
            throw std::invalid_argument("MoireParams: grating frequency above Nyquist");
        if (g->amplitude < 0.0) throw std::invalid_argument("MoireParams: negative amplitude");
    }
    if (std::abs(det3(p.color_gain)) < 1e-3)
        throw std::invalid_argument("MoireParams: color_gain is not invertible");
}

}  // namespace

Plane grating(int width, int height, const GratingParams& params) {
    if (params.frequency < 0.0 || params.frequency > 0.5)
        throw std::invalid_argument("grating: frequency above Nyquist");
    Plane out(width, height);
    const double kx = 2.0 * std::numbers::pi * params.frequency * std::cos(params.angle);
    const double ky = 2.0 * std::numbers::pi * params.frequency * std::sin(params.angle);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = static_cast<float>(params.amplitude * std::cos(kx * x + ky * y + params.phase));
    return out;
}

Frame synth_moire(const Frame& clean, const MoireParams& params) {
    validate(params);
    const int w = clean.width(), h = clean.height();
    const Plane g1 = grating(w, h, params.grating1);

    Frame out(w, h);
    for (int c = 0; c < 3; ++c) {
        GratingParams g2p = params.grating2;
        g2p.phase += params.channel_phase_shift[c];
        const Plane g2 = grating(w, h, g2p);
        Plane& dst = out.ch[c];
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double v = params.color_bias[c];
                for (int k = 0; k < 3; ++k) v += params.color_gain[c][k] * clean.ch[k].at(x, y);
                v += static_cast<double>(g1.at(x, y)) * g2.at(x, y);
                dst.at(x, y) = clamp01(static_cast<float>(v));
            }
        }
    }
    return out;
}

std::pair<Clip, Frame> synth_clip(const Frame& clean, const MoireParams& params) {
    validate(params);
    for (const auto& [dx, dy] : params.jitter)
        if (std::abs(dx) >= 16 || std::abs(dy) >= 16)
            throw std::invalid_argument("synth_clip: jitter magnitude must be < 16 px");

    Clip clip;
    for (int k = 0; k < 3; ++k) {
        const int i = k - 1;  // timestamp offset
        Frame shifted = circular_shift(clean, params.jitter[k].first, params.jitter[k].second);
        MoireParams frame_params = params;
        frame_params.grating1.phase += i * params.phase_increment;
        frame_params.grating2.phase += i * params.phase_increment;
        clip.frames[k] = synth_moire(shifted, frame_params);
    }
    return {std::move(clip), clean};
}

double uniform(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * (rng() / 4294967296.0);
}

Frame make_test_card(int width, int height, std::mt19937& rng) {
    Frame out(width, height);
    const double pi = std::numbers::pi;

    // Smooth per-channel background: a couple of low-frequency waves.
    std::array<std::array<double, 6>, 3> waves{};
    for (auto& wv : waves) {
        wv[0] = uniform(rng, 0.25, 0.75);               // base level
        wv[1] = uniform(rng, 0.08, 0.2);                // wave amplitude
        wv[2] = uniform(rng, 0.5, 2.0) * 2.0 * pi / width;
        wv[3] = uniform(rng, 0.5, 2.0) * 2.0 * pi / height;
        wv[4] = uniform(rng, 0.0, 2.0 * pi);            // phase
        wv[5] = uniform(rng, 0.02, 0.04);               // texture amplitude
    }
    const double tex_fx = uniform(rng, 0.04, 0.09) * 2.0 * pi;
    const double tex_fy = uniform(rng, 0.04, 0.09) * 2.0 * pi;

    struct Shape {
        double cx, cy, rx, ry, edge;
        std::array<double, 3> color;
        bool disc;
    };
    std::vector<Shape> shapes(8);
    for (auto& s : shapes) {
        s.cx = uniform(rng, 0.1, 0.9) * width;
        s.cy = uniform(rng, 0.1, 0.9) * height;
        s.rx = uniform(rng, 0.05, 0.22) * width;
        s.ry = uniform(rng, 0.05, 0.22) * height;
        s.edge = uniform(rng, 1.5, 4.0);
        for (auto& c : s.color) c = uniform(rng, 0.1, 0.9);
        s.disc = uniform(rng, 0.0, 1.0) < 0.5;
    }

    // Striped mid-frequency patches: oriented detail that a band-reject
    // filter can destroy, so restoration quality depends on direction
    // handling. One axis-aligned, the rest free.
    struct Stripes {
        double cx, cy, rx, ry, kx, ky, phase, amp;
    };
    std::vector<Stripes> stripes(3);
    for (size_t i = 0; i < stripes.size(); ++i) {
        Stripes& s = stripes[i];
        s.cx = uniform(rng, 0.15, 0.85) * width;
        s.cy = uniform(rng, 0.15, 0.85) * height;
        s.rx = uniform(rng, 0.1, 0.2) * width;
        s.ry = uniform(rng, 0.1, 0.2) * height;
        const double freq = uniform(rng, 0.16, 0.32);
        double theta = uniform(rng, 0.0, pi);
        if (i == 0) theta = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : pi / 2.0;
        s.kx = 2.0 * pi * freq * std::cos(theta);
        s.ky = 2.0 * pi * freq * std::sin(theta);
        s.phase = uniform(rng, 0.0, 2.0 * pi);
        s.amp = uniform(rng, 0.09, 0.16);
    }

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::array<double, 3> px;
            for (int c = 0; c < 3; ++c) {
                const auto& wv = waves[c];
                px[c] = wv[0] + wv[1] * std::cos(wv[2] * x + wv[3] * y + wv[4]) +
                        wv[5] * std::cos(tex_fx * x + 0.7 * tex_fy * y) *
                            std::cos(0.8 * tex_fx * x - tex_fy * y);
            }
            for (const auto& s : shapes) {
                const double dx = (x - s.cx) / s.rx;
                const double dy = (y - s.cy) / s.ry;
                const double d = s.disc ? std::sqrt(dx * dx + dy * dy)
                                        : std::max(std::abs(dx), std::abs(dy));
                const double cover = 1.0 / (1.0 + std::exp(s.edge * (d - 1.0) * 8.0));
                for (int c = 0; c < 3; ++c) px[c] = px[c] * (1.0 - cover) + s.color[c] * cover;
            }
            for (const auto& s : stripes) {
                const double dx = (x - s.cx) / s.rx;
                const double dy = (y - s.cy) / s.ry;
                const double mask = 1.0 / (1.0 + std::exp((std::sqrt(dx * dx + dy * dy) - 1.0) * 12.0));
                const double v = s.amp * mask * std::cos(s.kx * x + s.ky * y + s.phase);
                for (int c = 0; c < 3; ++c) px[c] += v;
            }
            for (int c = 0; c < 3; ++c)
                out.ch[c].at(x, y) = static_cast<float>(std::clamp(px[c], 0.05, 0.92));
        }
    }
    return out;
}

}  // namespace vdm
