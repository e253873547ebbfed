#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vdm/align.hpp"
#include "vdm/image.hpp"

namespace vdm {

/// Peak signal-to-noise ratio in dB with peak 1.0, MSE over all channels.
/// Capped at 99.0 dB (identical frames hit the cap).
double psnr(const Frame& a, const Frame& b);

/// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1=0.01,
/// K2=0.03, peak 1.0, averaged over fully interior window positions.
double ssim(const Frame& a, const Frame& b);

/// Mean absolute difference over all channels.
double l1(const Frame& a, const Frame& b);

/// Mean absolute difference between warped consecutive outputs over interior
/// pixels (>= 8 px from borders). fields[i] aligns outputs[i] to
/// outputs[i+1]; lower is better.
double temporal_consistency(const std::vector<Frame>& outputs,
                            const std::vector<AlignmentField>& fields);

struct ClipScores {
    std::string name;
    double psnr = 0.0;
    double ssim = 0.0;
    double l1 = 0.0;
    double temporal = 0.0;
    double input_psnr = 0.0;
    double input_ssim = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

Aggregate aggregate(const std::vector<double>& values);

struct EvalReport {
    std::vector<ClipScores> clips;
};

/// One line per clip plus an aggregate block.
void print_report(const EvalReport& report, std::ostream& out);

}  // namespace vdm
