#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vdm/dct.hpp"
#include "vdm/synth.hpp"

using namespace vdm;

TEST_SUITE("synth") {

TEST_CASE("grating with zero frequency is a constant") {
    GratingParams g{0.0, 0.7, 1.1, 0.4};
    const Plane p = grating(12, 9, g);
    const float expected = static_cast<float>(0.4 * std::cos(1.1));
    for (float v : p.data) CHECK(v == doctest::Approx(expected));
}

TEST_CASE("grating with zero amplitude is zero") {
    const Plane p = grating(8, 8, {0.3, 1.0, 0.5, 0.0});
    for (float v : p.data) CHECK(v == 0.0f);
}

TEST_CASE("quarter-frequency horizontal grating has period 4") {
    const Plane p = grating(8, 4, {0.25, 0.0, 0.0, 0.8});
    for (int y = 0; y < 4; ++y) {
        CHECK(p.at(0, y) == doctest::Approx(0.8));
        CHECK(p.at(2, y) == doctest::Approx(-0.8));
        CHECK(p.at(4, y) == doctest::Approx(0.8));
    }
}

TEST_CASE("grating rejects frequencies above Nyquist") {
    CHECK_THROWS_AS(grating(8, 8, {0.51, 0.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("synth_moire with zero amplitudes and identity tone is the identity") {
    std::mt19937 rng(71);
    const Frame clean = testsupport::random_frame(24, 16, rng);
    MoireParams params;  // defaults: identity gain, zero bias, zero amplitudes
    const Frame out = synth_moire(clean, params);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < clean.ch[c].data.size(); ++i)
            CHECK(out.ch[c].data[i] == testsupport::AbsApprox(clean.ch[c].data[i]).margin(1e-7));
}

TEST_CASE("pure tone distortion scales the clean frame") {
    std::mt19937 rng(73);
    const Frame clean = testsupport::random_frame(16, 16, rng);
    MoireParams params;
    for (int c = 0; c < 3; ++c) params.color_gain[c][c] = 0.8;
    const Frame out = synth_moire(clean, params);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < clean.ch[c].data.size(); ++i)
            CHECK(out.ch[c].data[i] == testsupport::AbsApprox(0.8 * clean.ch[c].data[i]).margin(1e-6));
}

TEST_CASE("the added pattern matches the product-of-cosines identity") {
    const Frame gray(32, 32, 0.5f);
    MoireParams params;
    params.grating1 = {0.11, 0.3, 0.4, 0.2};
    params.grating2 = {0.17, 1.2, 1.9, 0.9};
    const Frame out = synth_moire(gray, params);

    const double pi = std::numbers::pi;
    for (int y = 0; y < 32; y += 5) {
        for (int x = 0; x < 32; x += 3) {
            const double ph1 =
                2 * pi * 0.11 * (x * std::cos(0.3) + y * std::sin(0.3)) + 0.4;
            const double ph2 =
                2 * pi * 0.17 * (x * std::cos(1.2) + y * std::sin(1.2)) + 1.9;
            // product-to-sum: a1 a2 cos(ph1) cos(ph2) = a1 a2 (cos(ph1-ph2)+cos(ph1+ph2))/2
            const double beat = 0.2 * 0.9 * 0.5 * (std::cos(ph1 - ph2) + std::cos(ph1 + ph2));
            CHECK(out.ch[1].at(x, y) - 0.5 == testsupport::AbsApprox(beat).margin(1e-6));
        }
    }
}

TEST_CASE("synth_moire validates parameters") {
    MoireParams params;
    params.grating1.frequency = 0.6;
    CHECK_THROWS_AS(synth_moire(Frame(8, 8, 0.5f), params), std::invalid_argument);
    MoireParams singular;
    singular.color_gain = {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    CHECK_THROWS_AS(synth_moire(Frame(8, 8, 0.5f), singular), std::invalid_argument);
}

TEST_CASE("synth_clip with zero jitter and zero increment gives identical frames") {
    std::mt19937 rng(79);
    const Frame clean = testsupport::random_frame(20, 20, rng);
    MoireParams params;
    params.grating1 = {0.2, 0.4, 0.1, 0.1};
    params.grating2 = {0.24, 1.3, 0.9, 1.0};
    auto [clip, gt] = synth_clip(clean, params);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < clip.frames[0].ch[c].data.size(); ++i) {
            CHECK(clip.frames[0].ch[c].data[i] == clip.frames[1].ch[c].data[i]);
            CHECK(clip.frames[1].ch[c].data[i] == clip.frames[2].ch[c].data[i]);
        }
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < gt.ch[c].data.size(); ++i)
            CHECK(gt.ch[c].data[i] == clean.ch[c].data[i]);
}

TEST_CASE("jitter shifts the clean content before the pattern is added") {
    std::mt19937 rng(83);
    const Frame clean = testsupport::random_frame(24, 24, rng);
    MoireParams params;
    params.grating1 = {0.21, 0.9, 0.3, 0.12};
    params.grating2 = {0.25, 1.8, 1.2, 1.0};
    params.jitter = {{{3, 0}, {0, 0}, {-3, 0}}};
    auto [clip, gt] = synth_clip(clean, params);
    const Frame expected_prev = synth_moire(circular_shift(clean, 3, 0), params);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < expected_prev.ch[c].data.size(); ++i)
            CHECK(clip.frames[0].ch[c].data[i] == expected_prev.ch[c].data[i]);
}

TEST_CASE("synth_clip rejects jitter of 16 px or more") {
    MoireParams params;
    params.jitter = {{{16, 0}, {0, 0}, {0, 0}}};
    CHECK_THROWS_AS(synth_clip(Frame(32, 32, 0.5f), params), std::invalid_argument);
}

TEST_CASE("same parameters give bit-identical results") {
    std::mt19937 rng_a(91), rng_b(91);
    const Frame card_a = make_test_card(48, 48, rng_a);
    const Frame card_b = make_test_card(48, 48, rng_b);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < card_a.ch[c].data.size(); ++i)
            CHECK(card_a.ch[c].data[i] == card_b.ch[c].data[i]);

    MoireParams params;
    params.grating1 = {0.3, 0.5, 0.7, 0.15};
    params.grating2 = {0.34, 1.5, 0.2, 1.0};
    params.phase_increment = 2.0;
    params.jitter = {{{2, -1}, {0, 0}, {-3, 2}}};
    auto [clip_a, gt_a] = synth_clip(card_a, params);
    auto [clip_b, gt_b] = synth_clip(card_b, params);
    for (int k = 0; k < 3; ++k)
        for (int c = 0; c < 3; ++c)
            for (size_t i = 0; i < clip_a.frames[k].ch[c].data.size(); ++i)
                CHECK(clip_a.frames[k].ch[c].data[i] == clip_b.frames[k].ch[c].data[i]);
}

TEST_CASE("zero-mean gratings leave no per-tile DC residual") {
    // Frequencies at whole cycles per 8-px tile keep each tile zero-mean.
    const Frame gray(64, 64, 0.5f);
    MoireParams params;
    params.grating1 = {0.375, 0.0, 0.0, 0.15};  // 3 cycles per tile
    params.grating2 = {0.25, 0.0, 0.0, 1.0};    // 2 cycles per tile
    const Frame out = synth_moire(gray, params);
    Plane pattern(64, 64);
    for (size_t i = 0; i < pattern.data.size(); ++i)
        pattern.data[i] = out.ch[0].data[i] - 0.5f;

    DirectionalTransform t(DirectionalMode::V, 8);
    double dc_abs_sum = 0.0;
    int tiles = 0;
    for_each_tile_spectrum(pattern, t, [&](const double* coeffs) {
        dc_abs_sum += std::abs(coeffs[0]);
        ++tiles;
    });
    CHECK(dc_abs_sum / tiles <= 1e-3);
}

TEST_CASE("make_test_card stays inside its value bounds") {
    std::mt19937 rng(97);
    const Frame card = make_test_card(64, 64, rng);
    for (int c = 0; c < 3; ++c)
        for (float v : card.ch[c].data) {
            CHECK(v >= 0.05f);
            CHECK(v <= 0.92f);
        }
}

}  // TEST_SUITE
