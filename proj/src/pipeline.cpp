#include "vdm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vdm/dct.hpp"
#include "vdm/png_io.hpp"

namespace fs = std::filesystem;

namespace vdm {

std::vector<DirectionalMode> PipelineConfig::modes() const {
    if (directional) return {kAllModes.begin(), kAllModes.end()};
    return {DirectionalMode::V, DirectionalMode::H};
}

void validate_config(const PipelineConfig& config) {
    if (config.block_size != 4 && config.block_size != 8 && config.block_size != 16)
        throw std::invalid_argument("config: block_size must be 4, 8 or 16");
    if (config.temperature <= 0.0) throw std::invalid_argument("config: temperature must be > 0");
    if (config.notch_width <= 0.0) throw std::invalid_argument("config: notch_width must be > 0");
    if (config.notch_depth < 0.0 || config.notch_depth > 1.0)
        throw std::invalid_argument("config: notch_depth must be in [0,1]");
    if (config.notch_top_k < 1) throw std::invalid_argument("config: notch_top_k must be >= 1");
    if (config.align.levels < 1) throw std::invalid_argument("config: align_levels must be >= 1");
    if (config.align.tile_size < 16) throw std::invalid_argument("config: align_tile_size must be >= 16");
    if (config.align.search_radius < 1)
        throw std::invalid_argument("config: align_search_radius must be >= 1");
    if (config.tdr.ridge < 0.0) throw std::invalid_argument("config: tdr_ridge must be >= 0");
    if (config.bank_source == BankSource::kFile && config.bank_path.empty())
        throw std::invalid_argument("config: bank=file requires a path");
    if (config.tdr.enabled && config.tdr.grid_source == GridSource::kLoad && config.tdr.grid_path.empty())
        throw std::invalid_argument("config: tdr_grid=load requires grid_path");
}

namespace {

std::string bank_source_string(const PipelineConfig& c) {
    switch (c.bank_source) {
        case BankSource::kAuto: return "auto";
        case BankSource::kIdentity: return "identity";
        case BankSource::kFile: return c.bank_path;
    }
    return "auto";
}

const char* grid_source_name(GridSource s) {
    switch (s) {
        case GridSource::kFit: return "fit";
        case GridSource::kLoad: return "load";
        case GridSource::kIdentity: return "identity";
    }
    return "fit";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_onoff(const std::string& v, const std::string& key) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": " + v);
}

}  // namespace

void write_config(const PipelineConfig& c, std::ostream& out) {
    out << "block_size=" << c.block_size << "\n";
    out << "bank=" << bank_source_string(c) << "\n";
    out << "temperature=" << c.temperature << "\n";
    out << "notch_width=" << c.notch_width << "\n";
    out << "notch_depth=" << c.notch_depth << "\n";
    out << "notch_top_k=" << c.notch_top_k << "\n";
    out << "directional=" << (c.directional ? "on" : "off") << "\n";
    out << "align=" << (c.align.enabled ? "on" : "off") << "\n";
    out << "align_levels=" << c.align.levels << "\n";
    out << "align_tile_size=" << c.align.tile_size << "\n";
    out << "align_search_radius=" << c.align.search_radius << "\n";
    out << "tdr=" << (c.tdr.enabled ? "on" : "off") << "\n";
    out << "tdr_grid=" << grid_source_name(c.tdr.grid_source) << "\n";
    out << "tdr_interp=" << interp_name(c.tdr.interp) << "\n";
    out << "tdr_ridge=" << c.tdr.ridge << "\n";
    if (!c.tdr.grid_path.empty()) out << "grid_path=" << c.tdr.grid_path << "\n";
    if (!c.tdr.fit_target_path.empty()) out << "fit_target=" << c.tdr.fit_target_path << "\n";
    if (!c.tdr.fit_source_path.empty()) out << "fit_source=" << c.tdr.fit_source_path << "\n";
}

void save_config(const PipelineConfig& config, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_config: cannot open " + path);
    write_config(config, f);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_config: cannot open " + path);
    PipelineConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: missing '=' at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "block_size") c.block_size = std::stoi(value);
        else if (key == "bank") {
            if (value == "auto") c.bank_source = BankSource::kAuto;
            else if (value == "identity") c.bank_source = BankSource::kIdentity;
            else { c.bank_source = BankSource::kFile; c.bank_path = value; }
        }
        else if (key == "temperature") c.temperature = std::stod(value);
        else if (key == "notch_width") c.notch_width = std::stod(value);
        else if (key == "notch_depth") c.notch_depth = std::stod(value);
        else if (key == "notch_top_k") c.notch_top_k = std::stoi(value);
        else if (key == "directional") c.directional = parse_onoff(value, key);
        else if (key == "align") c.align.enabled = parse_onoff(value, key);
        else if (key == "align_levels") c.align.levels = std::stoi(value);
        else if (key == "align_tile_size") c.align.tile_size = std::stoi(value);
        else if (key == "align_search_radius") c.align.search_radius = std::stoi(value);
        else if (key == "tdr") c.tdr.enabled = parse_onoff(value, key);
        else if (key == "tdr_grid") {
            if (value == "fit") c.tdr.grid_source = GridSource::kFit;
            else if (value == "load") c.tdr.grid_source = GridSource::kLoad;
            else if (value == "identity") c.tdr.grid_source = GridSource::kIdentity;
            else throw std::runtime_error("config: bad tdr_grid value " + value);
        }
        else if (key == "tdr_interp") c.tdr.interp = parse_interp(value);
        else if (key == "tdr_ridge") c.tdr.ridge = std::stod(value);
        else if (key == "grid_path") c.tdr.grid_path = value;
        else if (key == "fit_target") c.tdr.fit_target_path = value;
        else if (key == "fit_source") c.tdr.fit_source_path = value;
        else throw std::runtime_error("config: unknown key " + key);
    }
    validate_config(c);
    return c;
}

namespace {

constexpr int kFitSize = 256;  // grid-fit working resolution

FilterBank make_bank(const Clip& clip, const PipelineConfig& config) {
    switch (config.bank_source) {
        case BankSource::kIdentity: return identity_bank(config.block_size);
        case BankSource::kFile: {
            FilterBank bank = load_bank(config.bank_path);
            if (bank.block_size != config.block_size)
                throw std::runtime_error("bank file block_size does not match config");
            return bank;
        }
        case BankSource::kAuto: break;
    }
    // Pool every channel of all three frames for the median statistic.
    std::vector<const Plane*> planes;
    for (const Frame& f : clip.frames)
        for (const Plane& p : f.ch) planes.push_back(&p);
    return estimate_bank(planes, config.block_size, config.notch_top_k, config.notch_width,
                         config.notch_depth, config.modes());
}

Frame mean_frame(const std::array<Frame, 3>& frames) {
    Frame out(frames[0].width(), frames[0].height());
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < out.ch[c].pixel_count(); ++i)
            out.ch[c].data[i] = clamp01(
                (frames[0].ch[c].data[i] + frames[1].ch[c].data[i] + frames[2].ch[c].data[i]) / 3.0f);
    return out;
}

}  // namespace

DemoireResult run_demoire(const Clip& clip, const PipelineConfig& config, const Frame* fit_target) {
    validate_config(config);
    if (!clip.frames[0].same_size(clip.frames[1]) || !clip.frames[1].same_size(clip.frames[2]))
        throw std::invalid_argument("run_demoire: clip frames differ in size");

    DemoireResult result;
    result.bank = make_bank(clip, config);

    const std::vector<DirectionalMode> modes = config.modes();
    for (int k = 0; k < 3; ++k)
        result.demoired[k] = demoire_frame(clip.frames[k], result.bank, config.temperature, modes);

    const int w = clip.width(), h = clip.height();
    if (config.align.enabled) {
        result.field_prev = pyramid_align(result.demoired[1], result.demoired[0], config.align.levels,
                                          config.align.tile_size, config.align.search_radius);
        result.field_next = pyramid_align(result.demoired[1], result.demoired[2], config.align.levels,
                                          config.align.tile_size, config.align.search_radius);
        result.aligned[0] = warp(result.demoired[0], result.field_prev);
        result.aligned[2] = warp(result.demoired[2], result.field_next);
    } else {
        result.field_prev = identity_field(w, h, config.align.tile_size);
        result.field_next = identity_field(w, h, config.align.tile_size);
        result.aligned[0] = result.demoired[0];
        result.aligned[2] = result.demoired[2];
    }
    result.aligned[1] = result.demoired[1];

    if (!config.tdr.enabled) {
        result.output = result.demoired[1];
        return result;
    }

    Clip aligned_clip;
    aligned_clip.frames = result.aligned;

    BilateralGrid grid;
    switch (config.tdr.grid_source) {
        case GridSource::kIdentity:
            grid = identity_grid();
            break;
        case GridSource::kLoad:
            grid = load_grid(config.tdr.grid_path);
            break;
        case GridSource::kFit: {
            Frame target;
            if (fit_target) target = *fit_target;
            else if (!config.tdr.fit_target_path.empty()) target = load_image(config.tdr.fit_target_path);
            else throw std::runtime_error("run_demoire: tdr_grid=fit needs a fit target (missing grid)");

            Frame source_full = config.tdr.fit_source_path.empty()
                                    ? mean_frame(result.aligned)
                                    : load_image(config.tdr.fit_source_path);
            const Frame source = resize_bilinear(source_full, kFitSize, kFitSize);
            const Frame target_lr = resize_bilinear(target, kFitSize, kFitSize);
            grid = fit_grid(source, target_lr, guidance_map(source), config.tdr.ridge);
            break;
        }
    }
    result.output = tdr(aligned_clip, grid, config.tdr.interp);
    return result;
}

MoireParams draw_moire_params(std::mt19937& rng, const SynthRanges& r) {
    MoireParams p;
    p.grating1.frequency = uniform(rng, r.freq_min, r.freq_max);
    p.grating1.angle = uniform(rng, 0.0, 3.14159265358979323846);
    p.grating1.phase = uniform(rng, 0.0, 6.28318530717958647692);
    p.grating1.amplitude = uniform(rng, r.amplitude_min, r.amplitude_max);
    p.grating2.frequency = std::min(0.5, p.grating1.frequency + uniform(rng, r.freq_gap_min, r.freq_gap_max));
    p.grating2.angle = p.grating1.angle + uniform(rng, r.angle_gap_min, r.angle_gap_max);
    p.grating2.phase = uniform(rng, 0.0, 6.28318530717958647692);
    p.grating2.amplitude = 1.0;  // unit carrier; grating1 sets the beat amplitude
    p.channel_phase_shift = {0.0, uniform(rng, 0.4, 2.8), uniform(rng, 0.8, 5.5)};
    for (int c = 0; c < 3; ++c) {
        p.color_gain[c] = {0.0, 0.0, 0.0};
        p.color_gain[c][c] = uniform(rng, r.tone_min, r.tone_max);
        p.color_bias[c] = uniform(rng, -r.bias_max, r.bias_max);
    }
    auto jit = [&] { return static_cast<int>(rng() % (2 * r.jitter_max + 1)) - r.jitter_max; };
    p.jitter[0] = {jit(), jit()};
    p.jitter[1] = {0, 0};  // reference frame stays on the ground truth
    p.jitter[2] = {jit(), jit()};
    p.phase_increment = uniform(rng, r.phase_increment_min, r.phase_increment_max);
    return p;
}

void write_params(const MoireParams& p, std::ostream& out) {
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s=%.9g\n", key, v);
        out << buf;
    };
    put("freq1", p.grating1.frequency);
    put("angle1", p.grating1.angle);
    put("phase1", p.grating1.phase);
    put("amplitude1", p.grating1.amplitude);
    put("freq2", p.grating2.frequency);
    put("angle2", p.grating2.angle);
    put("phase2", p.grating2.phase);
    put("amplitude2", p.grating2.amplitude);
    put("channel_phase_r", p.channel_phase_shift[0]);
    put("channel_phase_g", p.channel_phase_shift[1]);
    put("channel_phase_b", p.channel_phase_shift[2]);
    put("gain_r", p.color_gain[0][0]);
    put("gain_g", p.color_gain[1][1]);
    put("gain_b", p.color_gain[2][2]);
    put("bias_r", p.color_bias[0]);
    put("bias_g", p.color_bias[1]);
    put("bias_b", p.color_bias[2]);
    out << "jitter_prev=" << p.jitter[0].first << " " << p.jitter[0].second << "\n";
    out << "jitter_ref=" << p.jitter[1].first << " " << p.jitter[1].second << "\n";
    out << "jitter_next=" << p.jitter[2].first << " " << p.jitter[2].second << "\n";
    put("phase_increment", p.phase_increment);
    out << "seed=" << p.seed << "\n";
}

void run_synth(int count, const std::string& out_dir, uint32_t seed, int width, int height,
               const SynthRanges& ranges) {
    if (count < 0) throw std::invalid_argument("run_synth: count must be >= 0");
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        const uint32_t clip_seed = seed + 1000003u * static_cast<uint32_t>(i + 1);
        std::mt19937 rng(clip_seed);
        const Frame clean = make_test_card(width, height, rng);
        MoireParams params = draw_moire_params(rng, ranges);
        params.seed = clip_seed;
        auto [clip, gt] = synth_clip(clean, params);

        char name[32];
        std::snprintf(name, sizeof(name), "clip%03d", i);
        const fs::path dir = fs::path(out_dir) / name;
        fs::create_directories(dir);
        save_image(clip.frames[0], (dir / "m_prev.png").string());
        save_image(clip.frames[1], (dir / "m_ref.png").string());
        save_image(clip.frames[2], (dir / "m_next.png").string());
        save_image(gt, (dir / "gt.png").string());
        std::ofstream pf(dir / "params.txt");
        if (!pf) throw std::runtime_error("run_synth: cannot write params.txt");
        write_params(params, pf);
    }
}

std::vector<ClipEntry> list_dataset(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("dataset directory not found: " + dir);
    std::vector<ClipEntry> entries;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_directory()) continue;
        const std::string name = e.path().filename().string();
        if (name.rfind("clip", 0) != 0) continue;
        ClipEntry entry;
        entry.name = name;
        entry.prev = (e.path() / "m_prev.png").string();
        entry.ref = (e.path() / "m_ref.png").string();
        entry.next = (e.path() / "m_next.png").string();
        entry.gt = (e.path() / "gt.png").string();
        for (const std::string* p : {&entry.prev, &entry.ref, &entry.next, &entry.gt})
            if (!fs::is_regular_file(*p)) throw std::runtime_error("malformed dataset: missing " + *p);
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(),
              [](const ClipEntry& a, const ClipEntry& b) { return a.name < b.name; });
    return entries;
}

Clip load_clip(const ClipEntry& entry) {
    Clip clip;
    clip.frames[0] = load_image(entry.prev);
    clip.frames[1] = load_image(entry.ref);
    clip.frames[2] = load_image(entry.next);
    return clip;
}

EvalReport run_eval(const std::string& dataset_dir, const PipelineConfig& config) {
    validate_config(config);
    const std::vector<ClipEntry> entries = list_dataset(dataset_dir);

    EvalReport report;
    report.clips.resize(entries.size());

    auto eval_clip = [&](size_t idx) {
        const ClipEntry& entry = entries[idx];
        const Clip clip = load_clip(entry);
        const Frame gt = load_image(entry.gt);
        const DemoireResult res = run_demoire(clip, config, &gt);

        ClipScores s;
        s.name = entry.name;
        s.psnr = psnr(res.output, gt);
        s.ssim = ssim(res.output, gt);
        s.l1 = l1(res.output, gt);
        // Consistency of the aligned stack: the aligned frames are already
        // registered, so identity fields pair them.
        const std::vector<Frame> stack{res.aligned[0], res.aligned[1], res.aligned[2]};
        const AlignmentField id = identity_field(clip.width(), clip.height(), config.align.tile_size);
        s.temporal = temporal_consistency(stack, {id, id});
        s.input_psnr = psnr(clip.frames[1], gt);
        s.input_ssim = ssim(clip.frames[1], gt);
        report.clips[idx] = std::move(s);
    };

    const unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                                static_cast<unsigned>(entries.size()) + 1);
    if (workers <= 1 || entries.size() <= 1) {
        for (size_t i = 0; i < entries.size(); ++i) eval_clip(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < entries.size(); i = next.fetch_add(1)) {
                    try {
                        eval_clip(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    return report;
}

void run_fit_grid(const std::string& source_path, const std::string& target_path,
                  const std::string& out_grid_path, double ridge) {
    const Frame source = resize_bilinear(load_image(source_path), kFitSize, kFitSize);
    const Frame target = resize_bilinear(load_image(target_path), kFitSize, kFitSize);
    const BilateralGrid grid = fit_grid(source, target, guidance_map(source), ridge);
    save_grid(grid, out_grid_path);
}

void run_spectrum(const std::string& image_path, DirectionalMode mode, int block_size,
                  std::ostream& out) {
    const Frame frame = load_image(image_path);
    const Plane luma = to_luma(frame);
    DirectionalTransform transform(mode, block_size);
    const std::vector<double> medians = median_abs_spectrum({&luma}, transform);

    char buf[64];
    out << "mode,group,pos,median_abs\n";
    for (int j = 0; j < transform.group_count(); ++j)
        for (int p = 0; p < transform.group_length(j); ++p) {
            std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.9g\n", mode_name(mode), j, p,
                          medians[transform.group_offset(j) + p]);
            out << buf;
        }
}

}  // namespace vdm
