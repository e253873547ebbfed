#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vdm/dct.hpp"
#include "vdm/image.hpp"

namespace vdm {

/// Per-coefficient attenuation for one directional mode. Gains are in [0,1],
/// share the ragged shape of BlockSpectrum, and the DC-most gain
/// (groups[0][0]) is always 1.
struct FilterMask {
    DirectionalMode mode = DirectionalMode::V;
    int block_size = 0;
    std::vector<std::vector<float>> gains;
};

/// One mask per directional mode, all sharing a block size.
struct FilterBank {
    int block_size = 0;
    std::vector<FilterMask> masks;  // indexed by mode_index()

    const FilterMask& mask_for(DirectionalMode mode) const { return masks[mode_index(mode)]; }
};

FilterMask identity_mask(DirectionalMode mode, int block_size);
FilterBank identity_bank(int block_size);

/// Gaussian band-reject in the radial index:
/// gain(j,p) = 1 - depth * exp(-(rho(j,p) - center)^2 / (2 width^2)),
/// with the DC gain forced back to 1.
FilterMask analytic_notch(DirectionalMode mode, int block_size, double center, double width,
                          double depth);

/// Data-adaptive notch: the median |coefficient| per spectral position over
/// all tiles of the supplied planes picks the top_k peaks (DC and rho <= 1
/// excluded); one analytic notch per peak, combined multiplicatively.
FilterMask estimate_notch(const std::vector<const Plane*>& planes, DirectionalMode mode,
                          int block_size, int top_k, double width, double depth);

/// estimate_notch across modes; modes not in `modes` get identity masks.
FilterBank estimate_bank(const std::vector<const Plane*>& planes, int block_size, int top_k,
                         double width, double depth, const std::vector<DirectionalMode>& modes);

/// Median |coefficient| per flat spectral position over all tiles of the
/// supplied planes.
std::vector<double> median_abs_spectrum(const std::vector<const Plane*>& planes,
                                        const DirectionalTransform& transform);

/// Per-pixel weights over the directional branches. weights[m] is a plane;
/// each pixel's vector across planes is nonnegative and sums to 1.
struct DirectionWeights {
    int width = 0;
    int height = 0;
    std::vector<Plane> weights;
};

/// Softmax of -energy/temperature per pixel: branches that removed less
/// energy get more weight.
DirectionWeights direction_weights(const std::vector<Plane>& residual_energy, double temperature);

/// Full single-frame rejection: per channel, run every branch's filtered
/// transform, weight branches by removed energy, and blend. Output clamped
/// to [0,1].
Frame demoire_frame(const Frame& frame, const FilterBank& bank, double temperature);
Frame demoire_frame(const Frame& frame, const FilterBank& bank, double temperature,
                    const std::vector<DirectionalMode>& modes);

/// Text round-trip of a FilterBank (9 significant digits).
void save_bank(const FilterBank& bank, const std::string& path);
void write_bank(const FilterBank& bank, std::ostream& out);
FilterBank load_bank(const std::string& path);
FilterBank read_bank(std::istream& in);

}  // namespace vdm
