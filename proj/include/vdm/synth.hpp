#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>

#include "vdm/image.hpp"

namespace vdm {

/// A single sinusoidal grating: amplitude * cos(2 pi f (x cos a + y sin a) + phase).
struct GratingParams {
    double frequency = 0.0;  // cycles/pixel, [0, 0.5]
    double angle = 0.0;      // radians
    double phase = 0.0;      // radians
    double amplitude = 0.0;  // >= 0
};

/// Full degradation model: the interference pattern is the product of two
/// gratings (the beat carries the moire), plus a global tone distortion and
/// per-frame jitter.
struct MoireParams {
    GratingParams grating1;
    GratingParams grating2;
    std::array<double, 3> channel_phase_shift{0, 0, 0};  // added to grating2 per channel
    std::array<std::array<double, 3>, 3> color_gain{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::array<double, 3> color_bias{0, 0, 0};
    std::array<std::pair<int, int>, 3> jitter{{{0, 0}, {0, 0}, {0, 0}}};  // (dx,dy) per timestamp
    double phase_increment = 0.0;  // grating phase advance per frame step
    uint32_t seed = 0;
};

Plane grating(int width, int height, const GratingParams& params);

/// Applies the degradation to one frame: clamp(color_gain * clean + bias + M).
Frame synth_moire(const Frame& clean, const MoireParams& params);

/// Builds a jittered 3-frame clip with per-frame decorrelated moire; the
/// ground truth is the unshifted clean frame at t.
std::pair<Clip, Frame> synth_clip(const Frame& clean, const MoireParams& params);

/// Uniform draw from raw mt19937 output; identical across standard libraries.
double uniform(std::mt19937& rng, double lo, double hi);

/// Deterministic synthetic content: smooth color background, soft-edged
/// shapes, and a faint texture so alignment has signal to lock onto.
Frame make_test_card(int width, int height, std::mt19937& rng);

}  // namespace vdm
