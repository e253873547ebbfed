#pragma once

#include <string>

#include "vdm/image.hpp"

namespace vdm {

/// Reads an 8- or 16-bit PNG. Grayscale is replicated to three channels,
/// palette images are expanded, alpha is dropped. Values map to [0,1] by
/// dividing by the bit-depth maximum; no gamma transform is applied.
Frame load_image(const std::string& path);

/// Writes an 8-bit RGB PNG. Each value v is stored as
/// round-half-up(clamp(v,0,1) * 255).
void save_image(const Frame& frame, const std::string& path);

/// Quantization applied by save_image, exposed for round-trip checks.
inline uint8_t quantize8(float v) { return static_cast<uint8_t>(clamp01(v) * 255.0f + 0.5f); }

}  // namespace vdm
