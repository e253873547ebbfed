#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "vdm/metrics.hpp"
#include "vdm/synth.hpp"

using namespace vdm;

TEST_SUITE("metrics") {

TEST_CASE("psnr of identical frames hits the 99 dB cap") {
    std::mt19937 rng(157);
    const Frame f = testsupport::random_frame(16, 16, rng);
    CHECK(psnr(f, f) == 99.0);
}

TEST_CASE("psnr of black vs white is 0 dB") {
    CHECK(psnr(Frame(8, 8, 0.0f), Frame(8, 8, 1.0f)) == testsupport::AbsApprox(0.0).margin(1e-9));
}

TEST_CASE("psnr matches the closed form at MSE 0.01") {
    const Frame a(12, 12, 0.5f);
    const Frame b(12, 12, 0.6f);
    CHECK(psnr(a, b) == doctest::Approx(20.0).epsilon(1e-5));
}

TEST_CASE("psnr is symmetric and permutation invariant") {
    std::mt19937 rng(163);
    const Frame a = testsupport::random_frame(12, 10, rng);
    const Frame b = testsupport::random_frame(12, 10, rng);
    CHECK(psnr(a, b) == doctest::Approx(psnr(b, a)));

    std::vector<size_t> perm(120);
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Frame pa(12, 10), pb(12, 10);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < perm.size(); ++i) {
            pa.ch[c].data[i] = a.ch[c].data[perm[i]];
            pb.ch[c].data[i] = b.ch[c].data[perm[i]];
        }
    CHECK(psnr(pa, pb) == doctest::Approx(psnr(a, b)).epsilon(1e-9));
}

TEST_CASE("psnr rejects mismatched dimensions") {
    CHECK_THROWS_AS(psnr(Frame(8, 8), Frame(8, 9)), std::invalid_argument);
}

TEST_CASE("ssim of a frame with itself is exactly 1") {
    std::mt19937 rng(167);
    const Frame f = testsupport::random_frame(24, 24, rng);
    CHECK(ssim(f, f) == testsupport::AbsApprox(1.0).margin(1e-12));
}

TEST_CASE("ssim of constant frames matches the zero-variance closed form") {
    const double mu_a = 0.25, mu_b = 0.75;
    const Frame a(16, 16, static_cast<float>(mu_a));
    const Frame b(16, 16, static_cast<float>(mu_b));
    // luma of a constant RGB frame is the same constant
    const double c1 = 0.01 * 0.01;
    const double expected = (2 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
    CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("ssim of a textured image and its negative is tiny") {
    std::mt19937 rng(173);
    const Frame f = make_test_card(64, 64, rng);
    Frame inv = f;
    for (int c = 0; c < 3; ++c)
        for (auto& v : inv.ch[c].data) v = 1.0f - v;
    CHECK(ssim(f, inv) < 0.1);
}

TEST_CASE("ssim rejects frames smaller than the window") {
    CHECK_THROWS_AS(ssim(Frame(10, 12), Frame(10, 12)), std::invalid_argument);
}

TEST_CASE("l1 is the mean absolute difference") {
    const Frame a(8, 8, 0.2f);
    Frame b(8, 8, 0.2f);
    b.ch[2] = Plane(8, 8, 0.5f);
    CHECK(l1(a, b) == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("temporal consistency of identical frames under zero fields is 0") {
    std::mt19937 rng(179);
    const Frame f = testsupport::random_frame(32, 32, rng);
    const AlignmentField id = identity_field(32, 32, 32);
    CHECK(temporal_consistency({f, f, f}, {id, id}) == 0.0);
}

TEST_CASE("temporal consistency of black then white under zero fields is 1") {
    const AlignmentField id = identity_field(32, 32, 32);
    CHECK(temporal_consistency({Frame(32, 32, 0.0f), Frame(32, 32, 1.0f)}, {id}) ==
          doctest::Approx(1.0));
}

TEST_CASE("exact fields drive the warped difference to zero on the interior") {
    std::mt19937 rng(181);
    const Frame base = make_test_card(64, 64, rng);
    const Frame next = circular_shift(base, 2, 1);
    // warp samples at +shift, so aligning base onto next needs (-2,-1)
    AlignmentField field = identity_field(64, 64, 64);
    for (auto& s : field.shifts) {
        s.dx = -2.0;
        s.dy = -1.0;
    }
    CHECK(temporal_consistency({base, next}, {field}) <= 1e-6);
}

TEST_CASE("temporal consistency validates its inputs") {
    const AlignmentField id = identity_field(16, 16, 16);
    CHECK_THROWS_AS(temporal_consistency({Frame(16, 16)}, {}), std::invalid_argument);
    CHECK_THROWS_AS(temporal_consistency({Frame(16, 16), Frame(16, 16)}, {id, id}),
                    std::invalid_argument);
}

TEST_CASE("aggregate computes mean and population stddev") {
    const Aggregate a = aggregate({1.0, 2.0, 3.0, 4.0});
    CHECK(a.mean == doctest::Approx(2.5));
    CHECK(a.stddev == doctest::Approx(std::sqrt(1.25)));
    const Aggregate empty = aggregate({});
    CHECK(empty.mean == 0.0);
    CHECK(empty.stddev == 0.0);
}

TEST_CASE("print_report emits one row per clip plus aggregates") {
    EvalReport report;
    report.clips.push_back({"clip000", 30.0, 0.9, 0.01, 0.002, 20.0, 0.5});
    report.clips.push_back({"clip001", 32.0, 0.92, 0.012, 0.001, 21.0, 0.55});
    std::ostringstream out;
    print_report(report, out);
    const std::string text = out.str();
    CHECK(text.find("clip000 30.0000") != std::string::npos);
    CHECK(text.find("clips=2") != std::string::npos);
    CHECK(text.find("psnr mean=31.0000") != std::string::npos);
}

}  // TEST_SUITE
