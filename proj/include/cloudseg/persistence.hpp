#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "cloudseg/color_channels.hpp"
#include "cloudseg/image.hpp"
#include "cloudseg/pls.hpp"

namespace cloudseg {

inline constexpr int kModelVersion = 1;
inline constexpr int kRasterSidecarVersion = 1;

nlohmann::json model_to_json(const PlsModel& model);
/// Throws ValidationError on a version mismatch ("expected X, found Y") or malformed fields.
PlsModel model_from_json(const nlohmann::json& doc);

void save_model(const PlsModel& model, const std::filesystem::path& path, bool force);
PlsModel load_model(const std::filesystem::path& path);

/// Sidecar of a raster PNG: `<png>.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& png);

/// 16-bit gray PNG with value round(p * 65535) plus a sidecar recording the degenerate flag.
void save_probability_map(const ProbabilityMap& prob, const std::filesystem::path& png, bool force);
ProbabilityMap load_probability_map(const std::filesystem::path& png);

/// 16-bit gray PNG after an affine rescale of [min, max] to [0, 65535]; the sidecar keeps
/// min and max so values round-trip to within (max - min) / 65535.
void save_channel_map(const ChannelMap& map, const std::filesystem::path& png, bool force);
ChannelMap load_channel_map(const std::filesystem::path& png);

}  // namespace cloudseg
