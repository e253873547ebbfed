#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vdm/align.hpp"
#include "vdm/bilateral.hpp"
#include "vdm/filter.hpp"
#include "vdm/image.hpp"
#include "vdm/metrics.hpp"
#include "vdm/synth.hpp"

namespace vdm {

enum class BankSource { kAuto, kIdentity, kFile };
enum class GridSource { kFit, kLoad, kIdentity };

struct AlignConfig {
    bool enabled = true;
    int levels = 3;
    int tile_size = 64;
    int search_radius = 8;
};

struct TdrConfig {
    bool enabled = true;
    GridSource grid_source = GridSource::kFit;
    SliceInterp interp = SliceInterp::kTrilinear;
    double ridge = 1e-3;
    std::string grid_path;        // for grid_source = load
    std::string fit_target_path;  // for grid_source = fit outside eval
    std::string fit_source_path;  // optional fit-source override
};

struct PipelineConfig {
    int block_size = 8;
    BankSource bank_source = BankSource::kAuto;
    std::string bank_path;
    double temperature = 0.05;
    double notch_width = 0.8;
    double notch_depth = 1.0;
    int notch_top_k = 2;
    bool directional = true;  // when off, only modes V and H are used
    AlignConfig align;
    TdrConfig tdr;

    /// The branch modes this config runs.
    std::vector<DirectionalMode> modes() const;
};

void validate_config(const PipelineConfig& config);
PipelineConfig load_config(const std::string& path);
void write_config(const PipelineConfig& config, std::ostream& out);
void save_config(const PipelineConfig& config, const std::string& path);

struct DemoireResult {
    Frame output;
    std::array<Frame, 3> demoired;
    std::array<Frame, 3> aligned;
    AlignmentField field_prev;
    AlignmentField field_next;
    FilterBank bank;
};

/// Full pipeline on one clip: per-frame band-reject filtering, neighbor
/// alignment to the reference, and the bilateral refinement stage.
/// fit_target supplies the grid-fit target frame when the config asks for a
/// fitted grid and no fit_target_path is set.
DemoireResult run_demoire(const Clip& clip, const PipelineConfig& config,
                          const Frame* fit_target = nullptr);

/// Parameter ranges the synthesizer draws from.
struct SynthRanges {
    double freq_min = 0.18, freq_max = 0.45;
    double freq_gap_min = 0.01, freq_gap_max = 0.05;
    double angle_gap_min = 0.75, angle_gap_max = 1.15;
    double amplitude_min = 0.08, amplitude_max = 0.2;
    int jitter_max = 6;
    double tone_min = 0.7, tone_max = 1.1;
    double bias_max = 0.04;
    double phase_increment_min = 1.5, phase_increment_max = 2.8;
};

MoireParams draw_moire_params(std::mt19937& rng, const SynthRanges& ranges);
void write_params(const MoireParams& params, std::ostream& out);

/// Writes `count` clip directories clipNNN/{m_prev,m_ref,m_next,gt}.png +
/// params.txt under out_dir. Deterministic under seed.
void run_synth(int count, const std::string& out_dir, uint32_t seed, int width, int height,
               const SynthRanges& ranges = {});

struct ClipEntry {
    std::string name;
    std::string prev, ref, next, gt;
};

std::vector<ClipEntry> list_dataset(const std::string& dir);
Clip load_clip(const ClipEntry& entry);

/// Runs the pipeline on every clip of a run_synth-layout dataset and scores
/// outputs against ground truth.
EvalReport run_eval(const std::string& dataset_dir, const PipelineConfig& config);

/// Resizes both images to 256x256, fits the grid, writes the BGRD file.
void run_fit_grid(const std::string& source_path, const std::string& target_path,
                  const std::string& out_grid_path, double ridge);

/// Median |coefficient| per spectral position of the image's luma tiles,
/// as CSV rows "mode,group,pos,median_abs".
void run_spectrum(const std::string& image_path, DirectionalMode mode, int block_size,
                  std::ostream& out);

/// CLI entry point (subcommands: synth, demoire, eval, fit-grid, spectrum).
/// Returns 0 on success, 1 on runtime failure, 2 on usage errors.
int cli_main(int argc, const char* const* argv);

}  // namespace vdm
