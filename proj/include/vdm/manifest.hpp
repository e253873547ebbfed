#pragma once

#include <string>
#include <vector>

#include "vdm/pipeline.hpp"

namespace vdm {

/// Committed description of the synthetic benchmark: generator seed and
/// ranges plus the frozen metric bounds the acceptance run asserts.
struct BenchmarkManifest {
    uint32_t seed = 0;
    int clips = 0;
    int width = 0;
    int height = 0;
    SynthRanges ranges;
    double min_psnr_gain_db = 0.0;         // spec floor
    double calibrated_psnr_gain_db = 0.0;  // frozen from the first run, 0.5 dB margin
    double max_input_psnr_db = 0.0;        // per-clip degradation guarantee
    double runtime_budget_s = 0.0;         // synth + full eval
    double transform_runtime_budget_s = 0.0;
};

BenchmarkManifest load_manifest(const std::string& path);

/// Metric results of one benchmark reproduction.
struct BenchmarkResults {
    double mean_output_psnr = 0.0;
    double mean_input_psnr = 0.0;
    double max_input_psnr = 0.0;
    double no_directional_psnr = 0.0;
    double no_align_psnr = 0.0;
    double no_tdr_psnr = 0.0;
    double runtime_s = 0.0;
};

/// Checks the results against the manifest bounds; returns one message per
/// violated bound, naming the violating metric. Empty means pass.
std::vector<std::string> check_benchmark_bounds(const BenchmarkManifest& manifest,
                                                const BenchmarkResults& results);

}  // namespace vdm
