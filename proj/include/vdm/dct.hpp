#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vdm/image.hpp"

namespace vdm {

/// The eight directional transform modes. Tags follow the H.264 intra
/// direction numbering; mode 2 (DC) does not exist.
enum class DirectionalMode : int {
    V = 0,    // vertical
    H = 1,    // horizontal
    DDL = 3,  // diagonal down-left
    DDR = 4,  // diagonal down-right
    VR = 5,   // vertical-right
    HD = 6,   // horizontal-down
    VL = 7,   // vertical-left
    HU = 8,   // horizontal-up
};

inline constexpr std::array<DirectionalMode, 8> kAllModes = {
    DirectionalMode::V,  DirectionalMode::H,  DirectionalMode::DDL, DirectionalMode::DDR,
    DirectionalMode::VR, DirectionalMode::HD, DirectionalMode::VL,  DirectionalMode::HU};

const char* mode_name(DirectionalMode mode);
std::optional<DirectionalMode> parse_mode(std::string_view name);

/// Index of a mode within kAllModes.
int mode_index(DirectionalMode mode);

/// Partition of a block into oriented pixel lines. Every (row, col) of the
/// block appears in exactly one line; lines are ordered by ascending line
/// index, pixels within a line by ascending row (ties by ascending column).
struct LinePartition {
    int block_size = 0;
    std::vector<std::vector<std::pair<int, int>>> lines;
};

LinePartition line_partition(DirectionalMode mode, int block_size);

/// Two-stage directional spectrum. groups[j][p] is the second-stage
/// coefficient at first-stage frequency j, group position p; group j has one
/// entry per line of length > j.
struct BlockSpectrum {
    DirectionalMode mode = DirectionalMode::V;
    int block_size = 0;
    std::vector<std::vector<float>> groups;
};

struct FilterMask;  // defined in filter.hpp

/// Precomputed machinery for one (mode, block_size) pair: the line
/// partition, the stage-2 line groups, and orthonormal DCT-II bases for
/// every length that occurs. Immutable after construction and safe to share
/// across threads.
class DirectionalTransform {
  public:
    DirectionalTransform(DirectionalMode mode, int block_size);

    DirectionalMode mode() const { return mode_; }
    int block_size() const { return n_; }
    const LinePartition& partition() const { return partition_; }

    int group_count() const { return static_cast<int>(group_lengths_.size()); }
    int group_length(int j) const { return group_lengths_[j]; }
    int coeff_count() const { return n_ * n_; }
    /// Offset of group j within the flat coefficient layout.
    int group_offset(int j) const { return group_offsets_[j]; }

    /// Normalized radial index of coefficient (j, p):
    /// rho = j + p * block_size / group_length(j).
    double rho(int j, int p) const { return j + p * (static_cast<double>(n_) / group_lengths_[j]); }

    /// Positions excited by a constant block. With lines of unequal length a
    /// constant does not map to the single (0,0) coefficient: each line's DC
    /// is v*sqrt(len), and that profile spreads across group 0. Filters must
    /// leave these positions alone or constants stop being fixed points.
    bool dc_like(int j, int p) const { return dc_like_[group_offsets_[j] + p]; }
    const std::vector<char>& dc_like_flat() const { return dc_like_; }

    struct Workspace {
        std::vector<double> line_coeffs;  // per-line stage-1 coefficients
        std::vector<double> gather;       // stage buffer
        std::vector<double> result;       // stage buffer
    };

    /// block is block_size*block_size row-major; coeffs is coeff_count()
    /// in group-major flat layout.
    void forward(const double* block, double* coeffs, Workspace& ws) const;
    void inverse(const double* coeffs, double* block, Workspace& ws) const;

    BlockSpectrum to_spectrum(const double* coeffs) const;
    void from_spectrum(const BlockSpectrum& spectrum, double* coeffs) const;

    /// Flattens a ragged per-coefficient array into the flat layout.
    std::vector<float> flatten(const std::vector<std::vector<float>>& ragged) const;

  private:
    DirectionalMode mode_;
    int n_;
    LinePartition partition_;
    std::vector<std::vector<int>> line_pixels_;  // pixel index r*n+c per line
    std::vector<std::vector<int>> group_lines_;  // line indices contributing to group j
    std::vector<int> group_lengths_;
    std::vector<int> group_offsets_;
    std::vector<char> dc_like_;
    std::vector<std::vector<double>> bases_;  // bases_[L]: L x L orthonormal DCT-II, row-major

    const double* basis(int len) const { return bases_[len].data(); }
};

/// Two-stage directional DCT of a block (row-major, block_size^2 values).
BlockSpectrum forward_ddct(const std::vector<float>& block, int block_size, DirectionalMode mode);

/// Exact inverse of forward_ddct.
std::vector<float> inverse_ddct(const BlockSpectrum& spectrum);

/// Tile-by-tile filtered transform: pad to a block multiple, per tile apply
/// forward transform, per-coefficient gains (identity when mask is null),
/// inverse transform, then crop back.
Plane block_apply(const Plane& plane, DirectionalMode mode, int block_size,
                  const FilterMask* mask = nullptr);

/// Per-tile forward transform over a plane; fn receives the flat coefficient
/// array of each tile. Iterates tiles row-major over the padded plane.
void for_each_tile_spectrum(const Plane& plane, const DirectionalTransform& transform,
                            const std::function<void(const double*)>& fn);

}  // namespace vdm
