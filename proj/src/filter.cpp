#include "vdm/filter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vdm {

namespace {

void validate_gains(const FilterMask& mask) {
    for (const auto& group : mask.gains)
        for (float g : group)
            if (!(g >= 0.0f && g <= 1.0f)) throw std::invalid_argument("FilterMask: gain outside [0,1]");
    if (mask.gains.empty() || mask.gains[0].empty() || mask.gains[0][0] != 1.0f)
        throw std::invalid_argument("FilterMask: DC gain must be 1");
}

std::vector<std::vector<float>> ragged_like(const DirectionalTransform& t, float fill) {
    std::vector<std::vector<float>> gains(t.group_count());
    for (int j = 0; j < t.group_count(); ++j) gains[j].assign(t.group_length(j), fill);
    return gains;
}

}  // namespace

FilterMask identity_mask(DirectionalMode mode, int block_size) {
    DirectionalTransform t(mode, block_size);
    FilterMask mask{mode, block_size, ragged_like(t, 1.0f)};
    return mask;
}

FilterBank identity_bank(int block_size) {
    FilterBank bank;
    bank.block_size = block_size;
    for (DirectionalMode m : kAllModes) bank.masks.push_back(identity_mask(m, block_size));
    return bank;
}

FilterMask analytic_notch(DirectionalMode mode, int block_size, double center, double width,
                          double depth) {
    if (center < 0.0) throw std::invalid_argument("analytic_notch: center must be >= 0");
    if (width <= 0.0) throw std::invalid_argument("analytic_notch: width must be > 0");
    if (depth < 0.0 || depth > 1.0) throw std::invalid_argument("analytic_notch: depth must be in [0,1]");

    DirectionalTransform t(mode, block_size);
    FilterMask mask{mode, block_size, ragged_like(t, 1.0f)};
    for (int j = 0; j < t.group_count(); ++j) {
        for (int p = 0; p < t.group_length(j); ++p) {
            if (t.dc_like(j, p)) continue;  // constants must pass unchanged
            const double d = t.rho(j, p) - center;
            const double gain = 1.0 - depth * std::exp(-d * d / (2.0 * width * width));
            mask.gains[j][p] = static_cast<float>(std::clamp(gain, 0.0, 1.0));
        }
    }
    mask.gains[0][0] = 1.0f;
    return mask;
}

std::vector<double> median_abs_spectrum(const std::vector<const Plane*>& planes,
                                        const DirectionalTransform& transform) {
    const int cc = transform.coeff_count();
    std::vector<std::vector<double>> samples(cc);
    for (const Plane* p : planes) {
        if (p->width < transform.block_size() || p->height < transform.block_size())
            throw std::invalid_argument("median_abs_spectrum: plane smaller than one block");
        for_each_tile_spectrum(*p, transform, [&](const double* coeffs) {
            for (int i = 0; i < cc; ++i) samples[i].push_back(std::abs(coeffs[i]));
        });
    }
    std::vector<double> medians(cc);
    for (int i = 0; i < cc; ++i) {
        auto& v = samples[i];
        const size_t n = v.size();
        std::nth_element(v.begin(), v.begin() + n / 2, v.end());
        double hi = v[n / 2];
        if (n % 2 == 0) {
            std::nth_element(v.begin(), v.begin() + (n / 2 - 1), v.begin() + n / 2);
            medians[i] = 0.5 * (v[n / 2 - 1] + hi);
        } else {
            medians[i] = hi;
        }
    }
    return medians;
}

FilterMask estimate_notch(const std::vector<const Plane*>& planes, DirectionalMode mode,
                          int block_size, int top_k, double width, double depth) {
    if (top_k < 1) throw std::invalid_argument("estimate_notch: top_k must be >= 1");
    if (planes.empty()) throw std::invalid_argument("estimate_notch: no planes supplied");

    DirectionalTransform t(mode, block_size);
    const std::vector<double> medians = median_abs_spectrum(planes, t);

    // Candidate positions: everything except DC and the rho <= 1 band.
    struct Peak {
        double magnitude;
        int j, p;
        double rho;
    };
    std::vector<Peak> peaks;
    for (int j = 0; j < t.group_count(); ++j) {
        for (int p = 0; p < t.group_length(j); ++p) {
            if (j == 0 && p == 0) continue;
            if (t.dc_like(j, p)) continue;  // mean-carrying positions are never moire
            const double rho = t.rho(j, p);
            if (rho <= 1.0) continue;
            peaks.push_back({medians[t.group_offset(j) + p], j, p, rho});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        if (a.j != b.j) return a.j < b.j;
        return a.p < b.p;
    });

    FilterMask mask{mode, block_size, ragged_like(t, 1.0f)};
    const int k = std::min<int>(top_k, static_cast<int>(peaks.size()));
    for (int i = 0; i < k; ++i) {
        // Transform noise on flat content is ~1e-15; real peaks are >= 1e-3.
        if (peaks[i].magnitude <= 1e-9) break;
        const FilterMask notch = analytic_notch(mode, block_size, peaks[i].rho, width, depth);
        for (int j = 0; j < t.group_count(); ++j)
            for (int p = 0; p < t.group_length(j); ++p) mask.gains[j][p] *= notch.gains[j][p];
    }
    mask.gains[0][0] = 1.0f;
    return mask;
}

FilterBank estimate_bank(const std::vector<const Plane*>& planes, int block_size, int top_k,
                         double width, double depth, const std::vector<DirectionalMode>& modes) {
    FilterBank bank;
    bank.block_size = block_size;
    for (DirectionalMode m : kAllModes) {
        const bool active = std::find(modes.begin(), modes.end(), m) != modes.end();
        bank.masks.push_back(active ? estimate_notch(planes, m, block_size, top_k, width, depth)
                                    : identity_mask(m, block_size));
    }
    return bank;
}

DirectionWeights direction_weights(const std::vector<Plane>& residual_energy, double temperature) {
    if (residual_energy.empty()) throw std::invalid_argument("direction_weights: no energy planes");
    if (temperature <= 0.0) throw std::invalid_argument("direction_weights: temperature must be > 0");
    const Plane& first = residual_energy.front();
    for (const Plane& p : residual_energy)
        if (!p.same_size(first)) throw std::invalid_argument("direction_weights: dimension mismatch");

    const size_t count = residual_energy.size();
    DirectionWeights dw;
    dw.width = first.width;
    dw.height = first.height;
    dw.weights.assign(count, Plane(first.width, first.height));

    std::vector<double> ex(count);
    for (size_t i = 0; i < first.pixel_count(); ++i) {
        // Shift by the per-pixel minimum; exp of large negatives underflows.
        double emin = residual_energy[0].data[i];
        for (size_t m = 1; m < count; ++m) emin = std::min<double>(emin, residual_energy[m].data[i]);
        double sum = 0.0;
        for (size_t m = 0; m < count; ++m) {
            ex[m] = std::exp(-(residual_energy[m].data[i] - emin) / temperature);
            sum += ex[m];
        }
        for (size_t m = 0; m < count; ++m) dw.weights[m].data[i] = static_cast<float>(ex[m] / sum);
    }
    return dw;
}

namespace {

// Mean of (a-b)^2 over each block of the tile grid, broadcast back to pixels.
Plane block_mean_sq_diff(const Plane& a, const Plane& b, int block) {
    Plane out(a.width, a.height);
    for (int by = 0; by < a.height; by += block) {
        const int bh = std::min(block, a.height - by);
        for (int bx = 0; bx < a.width; bx += block) {
            const int bw = std::min(block, a.width - bx);
            double acc = 0.0;
            for (int y = by; y < by + bh; ++y)
                for (int x = bx; x < bx + bw; ++x) {
                    const double d = static_cast<double>(a.at(x, y)) - b.at(x, y);
                    acc += d * d;
                }
            const float mean = static_cast<float>(acc / (static_cast<double>(bw) * bh));
            for (int y = by; y < by + bh; ++y)
                for (int x = bx; x < bx + bw; ++x) out.at(x, y) = mean;
        }
    }
    return out;
}

}  // namespace

Frame demoire_frame(const Frame& frame, const FilterBank& bank, double temperature) {
    return demoire_frame(frame, bank, temperature,
                         std::vector<DirectionalMode>(kAllModes.begin(), kAllModes.end()));
}

Frame demoire_frame(const Frame& frame, const FilterBank& bank, double temperature,
                    const std::vector<DirectionalMode>& modes) {
    if (bank.masks.size() != kAllModes.size()) throw std::invalid_argument("demoire_frame: bank incomplete");
    for (const FilterMask& m : bank.masks) validate_gains(m);

    Frame out(frame.width(), frame.height());
    std::vector<Plane> filtered(modes.size());
    std::vector<Plane> energy(modes.size());
    for (int c = 0; c < 3; ++c) {
        const Plane& channel = frame.ch[c];
        for (size_t m = 0; m < modes.size(); ++m) {
            const FilterMask& mask = bank.mask_for(modes[m]);
            filtered[m] = block_apply(channel, modes[m], bank.block_size, &mask);
            energy[m] = block_mean_sq_diff(channel, filtered[m], bank.block_size);
        }
        const DirectionWeights dw = direction_weights(energy, temperature);
        Plane& dst = out.ch[c];
        for (size_t i = 0; i < dst.pixel_count(); ++i) {
            double acc = 0.0;
            for (size_t m = 0; m < modes.size(); ++m)
                acc += static_cast<double>(dw.weights[m].data[i]) * filtered[m].data[i];
            dst.data[i] = clamp01(static_cast<float>(acc));
        }
    }
    return out;
}

void write_bank(const FilterBank& bank, std::ostream& out) {
    out << "bank 1\n";
    out << "block_size=" << bank.block_size << "\n";
    char buf[32];
    for (const FilterMask& mask : bank.masks) {
        out << "[" << mode_name(mask.mode) << "]\n";
        for (const auto& group : mask.gains) {
            for (size_t p = 0; p < group.size(); ++p) {
                std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(group[p]));
                out << (p ? " " : "") << buf;
            }
            out << "\n";
        }
    }
}

void save_bank(const FilterBank& bank, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_bank: cannot open " + path);
    write_bank(bank, f);
    if (!f) throw std::runtime_error("save_bank: write failed for " + path);
}

FilterBank read_bank(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "bank 1") throw std::runtime_error("bank file: bad header");
    if (!std::getline(in, line) || line.rfind("block_size=", 0) != 0)
        throw std::runtime_error("bank file: missing block_size");
    FilterBank bank;
    bank.block_size = std::stoi(line.substr(11));

    bank.masks.resize(kAllModes.size());
    std::vector<bool> seen(kAllModes.size(), false);
    for (size_t i = 0; i < kAllModes.size(); ++i) {
        if (!std::getline(in, line) || line.size() < 3 || line.front() != '[' || line.back() != ']')
            throw std::runtime_error("bank file: expected mode header");
        const auto mode = parse_mode(line.substr(1, line.size() - 2));
        if (!mode) throw std::runtime_error("bank file: unknown mode tag " + line);
        DirectionalTransform t(*mode, bank.block_size);
        FilterMask mask{*mode, bank.block_size, {}};
        mask.gains.resize(t.group_count());
        for (int j = 0; j < t.group_count(); ++j) {
            if (!std::getline(in, line)) throw std::runtime_error("bank file: truncated gains");
            std::istringstream ls(line);
            double g;
            while (ls >> g) mask.gains[j].push_back(static_cast<float>(g));
            if (static_cast<int>(mask.gains[j].size()) != t.group_length(j))
                throw std::runtime_error("bank file: wrong group length");
        }
        validate_gains(mask);
        const int idx = mode_index(*mode);
        if (seen[idx]) throw std::runtime_error("bank file: duplicate mode");
        seen[idx] = true;
        bank.masks[idx] = std::move(mask);
    }
    return bank;
}

FilterBank load_bank(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_bank: cannot open " + path);
    return read_bank(f);
}

}  // namespace vdm
