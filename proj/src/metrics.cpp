#include "vdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace vdm {

namespace {
constexpr double kPsnrCap = 99.0;
}

double psnr(const Frame& a, const Frame& b) {
    if (!a.same_size(b)) throw std::invalid_argument("psnr: dimension mismatch");
    double acc = 0.0;
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < a.ch[c].pixel_count(); ++i) {
            const double d = static_cast<double>(a.ch[c].data[i]) - b.ch[c].data[i];
            acc += d * d;
        }
    const double mse = acc / (3.0 * a.ch[0].pixel_count());
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Frame& a, const Frame& b) {
    if (!a.same_size(b)) throw std::invalid_argument("ssim: dimension mismatch");
    if (a.width() < 11 || a.height() < 11) throw std::invalid_argument("ssim: frames smaller than 11x11");

    const Plane la = to_luma(a);
    const Plane lb = to_luma(b);

    // 11x11 Gaussian window, sigma 1.5, normalized to sum 1.
    constexpr int kRadius = 5;
    double win[11][11];
    double wsum = 0.0;
    for (int y = -kRadius; y <= kRadius; ++y)
        for (int x = -kRadius; x <= kRadius; ++x) {
            const double v = std::exp(-(x * x + y * y) / (2.0 * 1.5 * 1.5));
            win[y + kRadius][x + kRadius] = v;
            wsum += v;
        }
    for (auto& row : win)
        for (double& v : row) v /= wsum;

    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    double total = 0.0;
    size_t count = 0;
    for (int y = kRadius; y < la.height - kRadius; ++y) {
        for (int x = kRadius; x < la.width - kRadius; ++x) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int wy = -kRadius; wy <= kRadius; ++wy)
                for (int wx = -kRadius; wx <= kRadius; ++wx) {
                    const double w = win[wy + kRadius][wx + kRadius];
                    mu_a += w * la.at(x + wx, y + wy);
                    mu_b += w * lb.at(x + wx, y + wy);
                }
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int wy = -kRadius; wy <= kRadius; ++wy)
                for (int wx = -kRadius; wx <= kRadius; ++wx) {
                    const double w = win[wy + kRadius][wx + kRadius];
                    const double da = la.at(x + wx, y + wy) - mu_a;
                    const double db = lb.at(x + wx, y + wy) - mu_b;
                    var_a += w * da * da;
                    var_b += w * db * db;
                    cov += w * da * db;
                }
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            ++count;
        }
    }
    return count ? total / static_cast<double>(count) : 0.0;
}

double l1(const Frame& a, const Frame& b) {
    if (!a.same_size(b)) throw std::invalid_argument("l1: dimension mismatch");
    double acc = 0.0;
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < a.ch[c].pixel_count(); ++i)
            acc += std::abs(static_cast<double>(a.ch[c].data[i]) - b.ch[c].data[i]);
    return acc / (3.0 * a.ch[0].pixel_count());
}

double temporal_consistency(const std::vector<Frame>& outputs,
                            const std::vector<AlignmentField>& fields) {
    if (outputs.size() < 2) throw std::invalid_argument("temporal_consistency: need >= 2 outputs");
    if (fields.size() != outputs.size() - 1)
        throw std::invalid_argument("temporal_consistency: fields must pair consecutive outputs");

    constexpr int kMargin = 8;
    double acc = 0.0;
    size_t count = 0;
    for (size_t i = 0; i + 1 < outputs.size(); ++i) {
        const Frame warped = warp(outputs[i], fields[i]);
        const Frame& next = outputs[i + 1];
        if (!warped.same_size(next)) throw std::invalid_argument("temporal_consistency: size mismatch");
        for (int c = 0; c < 3; ++c)
            for (int y = kMargin; y < next.height() - kMargin; ++y)
                for (int x = kMargin; x < next.width() - kMargin; ++x) {
                    acc += std::abs(static_cast<double>(warped.ch[c].at(x, y)) - next.ch[c].at(x, y));
                    ++count;
                }
    }
    return count ? acc / static_cast<double>(count) : 0.0;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate agg;
    if (values.empty()) return agg;
    for (double v : values) agg.mean += v;
    agg.mean /= static_cast<double>(values.size());
    for (double v : values) agg.stddev += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(agg.stddev / static_cast<double>(values.size()));
    return agg;
}

void print_report(const EvalReport& report, std::ostream& out) {
    char buf[256];
    out << "clip psnr ssim l1 temporal input_psnr input_ssim\n";
    std::vector<double> psnrs, ssims, l1s, temporals, in_psnrs, in_ssims;
    for (const ClipScores& s : report.clips) {
        std::snprintf(buf, sizeof(buf), "%s %.4f %.5f %.6f %.6f %.4f %.5f\n", s.name.c_str(), s.psnr,
                      s.ssim, s.l1, s.temporal, s.input_psnr, s.input_ssim);
        out << buf;
        psnrs.push_back(s.psnr);
        ssims.push_back(s.ssim);
        l1s.push_back(s.l1);
        temporals.push_back(s.temporal);
        in_psnrs.push_back(s.input_psnr);
        in_ssims.push_back(s.input_ssim);
    }
    out << "clips=" << report.clips.size() << "\n";
    auto line = [&](const char* name, const std::vector<double>& v) {
        const Aggregate a = aggregate(v);
        std::snprintf(buf, sizeof(buf), "%s mean=%.4f std=%.4f\n", name, a.mean, a.stddev);
        out << buf;
    };
    line("psnr", psnrs);
    line("ssim", ssims);
    line("l1", l1s);
    line("temporal", temporals);
    line("input_psnr", in_psnrs);
    line("input_ssim", in_ssims);
}

}  // namespace vdm
