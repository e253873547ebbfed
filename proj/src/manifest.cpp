#include "vdm/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vdm {

BenchmarkManifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_manifest: cannot open " + path);
    BenchmarkManifest m;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("manifest: missing '=' in: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "seed") m.seed = static_cast<uint32_t>(std::stoul(value));
        else if (key == "clips") m.clips = std::stoi(value);
        else if (key == "width") m.width = std::stoi(value);
        else if (key == "height") m.height = std::stoi(value);
        else if (key == "freq_min") m.ranges.freq_min = std::stod(value);
        else if (key == "freq_max") m.ranges.freq_max = std::stod(value);
        else if (key == "freq_gap_min") m.ranges.freq_gap_min = std::stod(value);
        else if (key == "freq_gap_max") m.ranges.freq_gap_max = std::stod(value);
        else if (key == "angle_gap_min") m.ranges.angle_gap_min = std::stod(value);
        else if (key == "angle_gap_max") m.ranges.angle_gap_max = std::stod(value);
        else if (key == "amplitude_min") m.ranges.amplitude_min = std::stod(value);
        else if (key == "amplitude_max") m.ranges.amplitude_max = std::stod(value);
        else if (key == "jitter_max") m.ranges.jitter_max = std::stoi(value);
        else if (key == "tone_min") m.ranges.tone_min = std::stod(value);
        else if (key == "tone_max") m.ranges.tone_max = std::stod(value);
        else if (key == "bias_max") m.ranges.bias_max = std::stod(value);
        else if (key == "phase_increment_min") m.ranges.phase_increment_min = std::stod(value);
        else if (key == "phase_increment_max") m.ranges.phase_increment_max = std::stod(value);
        else if (key == "min_psnr_gain_db") m.min_psnr_gain_db = std::stod(value);
        else if (key == "calibrated_psnr_gain_db") m.calibrated_psnr_gain_db = std::stod(value);
        else if (key == "max_input_psnr_db") m.max_input_psnr_db = std::stod(value);
        else if (key == "runtime_budget_s") m.runtime_budget_s = std::stod(value);
        else if (key == "transform_runtime_budget_s") m.transform_runtime_budget_s = std::stod(value);
        else throw std::runtime_error("manifest: unknown key " + key);
    }
    if (m.clips <= 0 || m.width <= 0 || m.height <= 0)
        throw std::runtime_error("manifest: incomplete (clips/width/height)");
    return m;
}

std::vector<std::string> check_benchmark_bounds(const BenchmarkManifest& m,
                                                const BenchmarkResults& r) {
    std::vector<std::string> failures;
    char buf[160];
    auto fail = [&](const char* fmt, double a, double b) {
        std::snprintf(buf, sizeof(buf), fmt, a, b);
        failures.emplace_back(buf);
    };
    const double gain = r.mean_output_psnr - r.mean_input_psnr;
    if (gain < m.min_psnr_gain_db)
        fail("psnr: mean gain %.3f dB below floor %.3f dB", gain, m.min_psnr_gain_db);
    if (gain < m.calibrated_psnr_gain_db)
        fail("psnr: mean gain %.3f dB below calibrated %.3f dB", gain, m.calibrated_psnr_gain_db);
    if (r.max_input_psnr > m.max_input_psnr_db)
        fail("input_psnr: clip max %.3f dB above %.3f dB cap", r.max_input_psnr, m.max_input_psnr_db);
    if (r.mean_output_psnr < r.no_directional_psnr)
        fail("psnr: full %.3f dB below no-directional %.3f dB", r.mean_output_psnr,
             r.no_directional_psnr);
    if (r.mean_output_psnr < r.no_align_psnr)
        fail("psnr: full %.3f dB below no-align %.3f dB", r.mean_output_psnr, r.no_align_psnr);
    if (r.mean_output_psnr < r.no_tdr_psnr)
        fail("psnr: full %.3f dB below no-tdr %.3f dB", r.mean_output_psnr, r.no_tdr_psnr);
    if (m.runtime_budget_s > 0.0 && r.runtime_s > m.runtime_budget_s)
        fail("runtime: %.1f s above %.1f s budget", r.runtime_s, m.runtime_budget_s);
    return failures;
}

}  // namespace vdm
