#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vdm/filter.hpp"
#include "vdm/metrics.hpp"
#include "vdm/synth.hpp"

using namespace vdm;
using testsupport::TempDir;

TEST_SUITE("filter") {

TEST_CASE("analytic_notch with zero depth is all ones") {
    const FilterMask mask = analytic_notch(DirectionalMode::VL, 8, 4.0, 1.0, 0.0);
    for (const auto& g : mask.gains)
        for (float v : g) CHECK(v == 1.0f);
}

TEST_CASE("analytic_notch hits zero at the center and matches the closed form") {
    // Mode V, 8x8: group lengths are all 8, so rho(j,p) = j + p.
    const FilterMask mask = analytic_notch(DirectionalMode::V, 8, 4.0, 1.0, 1.0);
    CHECK(mask.gains[4][0] == testsupport::AbsApprox(0.0).margin(1e-7));     // rho = 4
    CHECK(mask.gains[2][4] == doctest::Approx(1.0 - std::exp(-2.0)));  // rho = 6
    CHECK(mask.gains[0][0] == 1.0f);                                   // DC forced
}

TEST_CASE("analytic_notch leaves DC-like positions untouched in every mode") {
    for (DirectionalMode m : kAllModes) {
        DirectionalTransform t(m, 8);
        for (double center : {1.5, 3.0, 6.0}) {
            const FilterMask mask = analytic_notch(m, 8, center, 1.0, 1.0);
            // A constant block must pass unchanged through the masked transform.
            const Plane p(16, 16, 0.55f);
            const Plane out = block_apply(p, m, 8, &mask);
            for (float v : out.data) CHECK(v == doctest::Approx(0.55).epsilon(1e-6));
        }
    }
}

TEST_CASE("analytic_notch validates parameters") {
    CHECK_THROWS_AS(analytic_notch(DirectionalMode::V, 8, -1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(analytic_notch(DirectionalMode::V, 8, 4.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(analytic_notch(DirectionalMode::V, 8, 4.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("estimate_notch finds a one-hot grating's position") {
    const int j = 2, p = 4;  // rho = 6 in mode V
    const Plane grat = testsupport::one_hot_grating(DirectionalMode::V, 8, j, p, 1.5f, 8, 8);
    const FilterMask mask = estimate_notch({&grat}, DirectionalMode::V, 8, 1, 0.8, 1.0);
    CHECK(mask.gains[j][p] == testsupport::AbsApprox(0.0).margin(1e-6));
    // Far from the notch the mask passes signal through.
    CHECK(mask.gains[0][1] > 0.9f);
}

TEST_CASE("estimate_notch on a constant plane is all ones") {
    const Plane flat(32, 32, 0.5f);
    const FilterMask mask = estimate_notch({&flat}, DirectionalMode::DDR, 8, 3, 0.8, 1.0);
    for (const auto& g : mask.gains)
        for (float v : g) CHECK(v == 1.0f);
}

TEST_CASE("estimate_notch rejects planes smaller than one block") {
    const Plane tiny(4, 4, 0.5f);
    CHECK_THROWS_AS(estimate_notch({&tiny}, DirectionalMode::V, 8, 2, 0.8, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_notch({}, DirectionalMode::V, 8, 2, 0.8, 1.0), std::invalid_argument);
    const Plane ok(16, 16, 0.5f);
    CHECK_THROWS_AS(estimate_notch({&ok}, DirectionalMode::V, 8, 0, 0.8, 1.0),
                    std::invalid_argument);
}

TEST_CASE("two superposed gratings are both selected at top_k 2") {
    const Plane a = testsupport::one_hot_grating(DirectionalMode::V, 8, 2, 4, 1.2f, 8, 8);
    const Plane b = testsupport::one_hot_grating(DirectionalMode::V, 8, 7, 3, 1.0f, 8, 8);
    Plane sum(a.width, a.height);
    for (size_t i = 0; i < sum.data.size(); ++i) sum.data[i] = a.data[i] + b.data[i];
    const FilterMask mask = estimate_notch({&sum}, DirectionalMode::V, 8, 2, 0.5, 1.0);
    CHECK(mask.gains[2][4] < 0.05f);
    CHECK(mask.gains[7][3] < 0.05f);
}

TEST_CASE("multiplicative notch combination commutes") {
    const FilterMask a = analytic_notch(DirectionalMode::HU, 8, 3.0, 0.7, 0.9);
    const FilterMask b = analytic_notch(DirectionalMode::HU, 8, 6.0, 1.2, 0.8);
    for (size_t j = 0; j < a.gains.size(); ++j)
        for (size_t p = 0; p < a.gains[j].size(); ++p) {
            const float ab = a.gains[j][p] * b.gains[j][p];
            const float ba = b.gains[j][p] * a.gains[j][p];
            CHECK(ab == ba);
        }
}

TEST_CASE("direction_weights is uniform for equal energies") {
    std::vector<Plane> e(8, Plane(6, 4, 0.25f));
    const DirectionWeights w = direction_weights(e, 0.05);
    for (const Plane& wp : w.weights)
        for (float v : wp.data) CHECK(v == doctest::Approx(0.125).epsilon(1e-6));
}

TEST_CASE("direction_weights flattens at very large temperature") {
    std::mt19937 rng(51);
    std::vector<Plane> e;
    for (int m = 0; m < 8; ++m) e.push_back(testsupport::random_plane(5, 5, rng, 0.0f, 0.1f));
    const DirectionWeights w = direction_weights(e, 1e6);
    for (const Plane& wp : w.weights)
        for (float v : wp.data) CHECK(v == doctest::Approx(0.125).epsilon(1e-4));
}

TEST_CASE("a dominant energy gets vanishing weight") {
    std::vector<Plane> e(8, Plane(3, 3, 0.0f));
    e[7] = Plane(3, 3, 1.0f);  // K = 1, temperature 0.01
    const DirectionWeights w = direction_weights(e, 0.01);
    // Oracle: softmax computed directly.
    const double z = 7.0 + std::exp(-100.0);
    CHECK(w.weights[7].at(1, 1) == testsupport::AbsApprox(std::exp(-100.0) / z).margin(1e-12));
    for (int m = 0; m < 7; ++m) CHECK(w.weights[m].at(1, 1) == doctest::Approx(1.0 / z).epsilon(1e-5));
}

TEST_CASE("direction_weights forms a probability simplex") {
    std::mt19937 rng(53);
    std::vector<Plane> e;
    for (int m = 0; m < 8; ++m) e.push_back(testsupport::random_plane(9, 7, rng, 0.0f, 0.02f));
    const DirectionWeights w = direction_weights(e, 0.05);
    for (size_t i = 0; i < w.weights[0].data.size(); ++i) {
        double sum = 0.0;
        for (const Plane& wp : w.weights) {
            CHECK(wp.data[i] >= 0.0f);
            sum += wp.data[i];
        }
        CHECK(sum == testsupport::AbsApprox(1.0).margin(1e-5));
    }
}

TEST_CASE("direction_weights validates input") {
    CHECK_THROWS_AS(direction_weights({}, 0.05), std::invalid_argument);
    std::vector<Plane> bad{Plane(4, 4), Plane(5, 4)};
    CHECK_THROWS_AS(direction_weights(bad, 0.05), std::invalid_argument);
    std::vector<Plane> ok(2, Plane(4, 4));
    CHECK_THROWS_AS(direction_weights(ok, 0.0), std::invalid_argument);
}

TEST_CASE("demoire_frame with an identity bank is the identity") {
    std::mt19937 rng(57);
    const Frame f = testsupport::random_frame(40, 24, rng);
    const Frame out = demoire_frame(f, identity_bank(8), 0.05);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < f.ch[c].data.size(); ++i)
            CHECK(std::abs(out.ch[c].data[i] - f.ch[c].data[i]) <= 1e-5f);
}

TEST_CASE("constant frames are fixed points for any bank") {
    const Frame f(32, 32, 0.5f);
    SUBCASE("analytic bank") {
        FilterBank bank;
        bank.block_size = 8;
        for (DirectionalMode m : kAllModes) bank.masks.push_back(analytic_notch(m, 8, 4.0, 1.0, 1.0));
        const Frame out = demoire_frame(f, bank, 0.05);
        for (int c = 0; c < 3; ++c)
            for (float v : out.ch[c].data) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("estimated bank") {
        std::mt19937 rng(59);
        const Frame noise = testsupport::random_frame(32, 32, rng);
        std::vector<const Plane*> planes;
        for (const Plane& p : noise.ch) planes.push_back(&p);
        const FilterBank bank =
            estimate_bank(planes, 8, 2, 0.8, 1.0, {kAllModes.begin(), kAllModes.end()});
        const Frame out = demoire_frame(f, bank, 0.05);
        for (int c = 0; c < 3; ++c)
            for (float v : out.ch[c].data) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("notching a known grating recovers at least 10 dB") {
    std::mt19937 rng(61);
    Frame clean = make_test_card(128, 128, rng);
    // Mode-V one-hot grating occupying a single coefficient per tile.
    const Plane grating = testsupport::one_hot_grating(DirectionalMode::V, 8, 4, 0, 1.6f, 16, 16);
    Frame moire = clean;
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < moire.ch[c].data.size(); ++i)
            moire.ch[c].data[i] = clamp01(moire.ch[c].data[i] + grating.data[i]);

    std::vector<const Plane*> planes;
    for (const Plane& p : moire.ch) planes.push_back(&p);
    // Enough peaks per mode to cover the grating where the oblique bases
    // spread it across several positions.
    const FilterBank bank = estimate_bank(planes, 8, 6, 0.8, 1.0, {kAllModes.begin(), kAllModes.end()});
    const Frame out = demoire_frame(moire, bank, 0.05);
    const double gain = psnr(out, clean) - psnr(moire, clean);
    CHECK(gain >= 10.0);
}

TEST_CASE("bank text format round trips bit-stably") {
    std::mt19937 rng(67);
    const Frame noise = testsupport::random_frame(64, 64, rng);
    std::vector<const Plane*> planes;
    for (const Plane& p : noise.ch) planes.push_back(&p);
    FilterBank bank = estimate_bank(planes, 8, 2, 0.8, 0.77, {kAllModes.begin(), kAllModes.end()});

    std::ostringstream first;
    write_bank(bank, first);
    std::istringstream in(first.str());
    const FilterBank loaded = read_bank(in);
    CHECK(loaded.block_size == bank.block_size);
    for (size_t m = 0; m < bank.masks.size(); ++m)
        for (size_t j = 0; j < bank.masks[m].gains.size(); ++j)
            for (size_t p = 0; p < bank.masks[m].gains[j].size(); ++p)
                CHECK(loaded.masks[m].gains[j][p] == bank.masks[m].gains[j][p]);

    std::ostringstream second;
    write_bank(loaded, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("bank reader rejects malformed input") {
    SUBCASE("bad header") {
        std::istringstream in("nope\n");
        CHECK_THROWS_AS(read_bank(in), std::runtime_error);
    }
    SUBCASE("gain out of range") {
        FilterBank bank = identity_bank(4);
        std::ostringstream out;
        write_bank(bank, out);
        std::string text = out.str();
        const auto pos = text.find("\n1 1 1 1\n");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 9, "\n1 2 1 1\n");
        std::istringstream in(text);
        CHECK_THROWS(read_bank(in));
    }
    SUBCASE("truncated file") {
        std::istringstream in("bank 1\nblock_size=8\n[V]\n1 1 1\n");
        CHECK_THROWS_AS(read_bank(in), std::runtime_error);
    }
}

}  // TEST_SUITE
