#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "vdm/pipeline.hpp"
#include "vdm/png_io.hpp"

namespace vdm {

namespace {

// Pipeline options shared by `demoire` and `eval`. Flags override values
// taken from --config.
struct ConfigCli {
    std::string config_path;
    std::optional<std::string> bank;
    std::optional<int> block_size;
    std::optional<double> temperature;
    std::optional<double> notch_width;
    std::optional<double> notch_depth;
    std::optional<int> notch_top_k;
    bool no_directional = false;
    bool no_align = false;
    std::optional<int> align_levels;
    std::optional<int> align_tile;
    std::optional<int> align_search;
    bool no_tdr = false;
    std::optional<std::string> tdr_grid;
    std::optional<std::string> grid_path;
    std::optional<std::string> fit_target;
    std::optional<std::string> fit_source;
    std::optional<std::string> tdr_interp;
    std::optional<double> tdr_ridge;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file; flags override it");
        cmd->add_option("--bank", bank, "filter bank: auto, identity, or a bank file path");
        cmd->add_option("--block-size", block_size, "transform block size (4, 8 or 16)");
        cmd->add_option("--temperature", temperature, "direction-weight softmax temperature");
        cmd->add_option("--notch-width", notch_width, "notch width in radial-index units");
        cmd->add_option("--notch-depth", notch_depth, "notch depth in [0,1]");
        cmd->add_option("--notch-top-k", notch_top_k, "peaks per mode for the estimated bank");
        cmd->add_flag("--no-directional", no_directional, "use only the V and H modes");
        cmd->add_flag("--no-align", no_align, "skip neighbor alignment");
        cmd->add_option("--align-levels", align_levels, "pyramid levels");
        cmd->add_option("--align-tile", align_tile, "refinement tile size");
        cmd->add_option("--align-search", align_search, "per-tile search radius (px)");
        cmd->add_flag("--no-tdr", no_tdr, "skip the refinement stage");
        cmd->add_option("--tdr-grid", tdr_grid, "grid source: fit, load or identity");
        cmd->add_option("--grid", grid_path, "grid file for --tdr-grid=load");
        cmd->add_option("--fit-target", fit_target, "target image for --tdr-grid=fit");
        cmd->add_option("--fit-source", fit_source, "source image override for --tdr-grid=fit");
        cmd->add_option("--tdr-interp", tdr_interp, "slicing: nearest or trilinear");
        cmd->add_option("--tdr-ridge", tdr_ridge, "grid-fit ridge weight");
    }

    PipelineConfig resolve() const {
        PipelineConfig c;
        if (!config_path.empty()) c = load_config(config_path);
        if (bank) {
            if (*bank == "auto") { c.bank_source = BankSource::kAuto; c.bank_path.clear(); }
            else if (*bank == "identity") { c.bank_source = BankSource::kIdentity; c.bank_path.clear(); }
            else { c.bank_source = BankSource::kFile; c.bank_path = *bank; }
        }
        if (block_size) c.block_size = *block_size;
        if (temperature) c.temperature = *temperature;
        if (notch_width) c.notch_width = *notch_width;
        if (notch_depth) c.notch_depth = *notch_depth;
        if (notch_top_k) c.notch_top_k = *notch_top_k;
        if (no_directional) c.directional = false;
        if (no_align) c.align.enabled = false;
        if (align_levels) c.align.levels = *align_levels;
        if (align_tile) c.align.tile_size = *align_tile;
        if (align_search) c.align.search_radius = *align_search;
        if (no_tdr) c.tdr.enabled = false;
        if (tdr_grid) {
            if (*tdr_grid == "fit") c.tdr.grid_source = GridSource::kFit;
            else if (*tdr_grid == "load") c.tdr.grid_source = GridSource::kLoad;
            else if (*tdr_grid == "identity") c.tdr.grid_source = GridSource::kIdentity;
            else throw CLI::ValidationError("--tdr-grid", "must be fit, load or identity");
        }
        if (grid_path) c.tdr.grid_path = *grid_path;
        if (fit_target) c.tdr.fit_target_path = *fit_target;
        if (fit_source) c.tdr.fit_source_path = *fit_source;
        if (tdr_interp) c.tdr.interp = parse_interp(*tdr_interp);
        if (tdr_ridge) c.tdr.ridge = *tdr_ridge;
        validate_config(c);
        return c;
    }
};

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"directional block-DCT video demoireing toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic moire dataset");
    std::string synth_out;
    int synth_count = 20;
    uint32_t synth_seed = 1234;
    int synth_w = 256, synth_h = 256;
    SynthRanges ranges;
    synth->add_option("--out", synth_out, "output dataset directory")->required();
    synth->add_option("--count", synth_count, "number of clips");
    synth->add_option("--seed", synth_seed, "master seed");
    synth->add_option("--width", synth_w, "frame width");
    synth->add_option("--height", synth_h, "frame height");
    synth->add_option("--freq-min", ranges.freq_min, "grating 1 frequency range low");
    synth->add_option("--freq-max", ranges.freq_max, "grating 1 frequency range high");
    synth->add_option("--amp-min", ranges.amplitude_min, "beat amplitude range low");
    synth->add_option("--amp-max", ranges.amplitude_max, "beat amplitude range high");
    synth->add_option("--jitter-max", ranges.jitter_max, "max |jitter| in px");
    synth->add_option("--tone-min", ranges.tone_min, "channel gain range low");
    synth->add_option("--tone-max", ranges.tone_max, "channel gain range high");

    // demoire
    auto* demoire = app.add_subcommand("demoire", "run the pipeline on one 3-frame clip");
    std::vector<std::string> clip_paths;
    std::string demoire_out = "out.png";
    std::string dump_align;
    ConfigCli demoire_cfg;
    demoire->add_option("frames", clip_paths, "prev, ref, next frame paths")
        ->expected(3)
        ->required();
    demoire->add_option("--out", demoire_out, "output image path");
    demoire->add_option("--dump-align", dump_align, "write the tile shift grids to this path");
    demoire_cfg.attach(demoire);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate the pipeline over a dataset");
    std::string eval_dir;
    std::string eval_out;
    ConfigCli eval_cfg;
    eval->add_option("dataset", eval_dir, "dataset directory in synth layout")->required();
    eval->add_option("--out", eval_out, "write the report here instead of stdout");
    eval_cfg.attach(eval);

    // fit-grid
    auto* fit = app.add_subcommand("fit-grid", "fit a bilateral grid from an image pair");
    std::string fit_src, fit_tgt, fit_out;
    double fit_ridge = 1e-3;
    fit->add_option("source", fit_src, "source image")->required();
    fit->add_option("target", fit_tgt, "target image")->required();
    fit->add_option("out_grid", fit_out, "output grid file")->required();
    fit->add_option("--ridge", fit_ridge, "ridge weight");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "dump median |coefficient| per position as CSV");
    std::string spec_image;
    std::string spec_mode = "V";
    int spec_block = 8;
    spectrum->add_option("image", spec_image, "input image")->required();
    spectrum->add_option("--mode", spec_mode, "directional mode tag");
    spectrum->add_option("--block-size", spec_block, "transform block size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed()) {
            run_synth(synth_count, synth_out, synth_seed, synth_w, synth_h, ranges);
            return 0;
        }
        if (demoire->parsed()) {
            const PipelineConfig config = demoire_cfg.resolve();
            Clip clip;
            clip.frames[0] = load_image(clip_paths[0]);
            clip.frames[1] = load_image(clip_paths[1]);
            clip.frames[2] = load_image(clip_paths[2]);
            const DemoireResult result = run_demoire(clip, config);
            save_image(result.output, demoire_out);
            if (!dump_align.empty()) {
                std::ofstream f(dump_align);
                if (!f) throw std::runtime_error("cannot open " + dump_align);
                f << "# field prev\n";
                dump_field(result.field_prev, f);
                f << "# field next\n";
                dump_field(result.field_next, f);
            }
            return 0;
        }
        if (eval->parsed()) {
            const PipelineConfig config = eval_cfg.resolve();
            const EvalReport report = run_eval(eval_dir, config);
            if (eval_out.empty()) {
                print_report(report, std::cout);
            } else {
                std::ofstream f(eval_out);
                if (!f) throw std::runtime_error("cannot open " + eval_out);
                print_report(report, f);
            }
            return 0;
        }
        if (fit->parsed()) {
            run_fit_grid(fit_src, fit_tgt, fit_out, fit_ridge);
            return 0;
        }
        if (spectrum->parsed()) {
            const auto mode = parse_mode(spec_mode);
            if (!mode) {
                std::cerr << "spectrum: unknown mode tag '" << spec_mode << "'\n";
                return 2;
            }
            run_spectrum(spec_image, *mode, spec_block, std::cout);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace vdm
