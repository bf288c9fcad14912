#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "cloudseg/image.hpp"

namespace cloudseg {

/// PNG or JPEG; 8-bit samples are divided by 255, 16-bit by 65535. Gray images are replicated
/// to RGB and alpha is dropped.
Image load_image(const std::filesystem::path& path);

/// 8-bit mask, 0 = sky, 255 = cloud. Other values are rejected with "non-binary mask" unless
/// `binarize_threshold` is given, in which case values >= threshold become cloud.
Mask load_mask(const std::filesystem::path& path, std::optional<int> binarize_threshold = std::nullopt);

/// 8-bit RGB PNG, samples round(v * 255).
void save_image(const Image& img, const std::filesystem::path& path, bool force);

/// 8-bit gray PNG, 0 / 255.
void save_mask(const Mask& mask, const std::filesystem::path& path, bool force);

struct Gray16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> values;
};

void save_gray16(const Gray16& raster, const std::filesystem::path& path, bool force);
Gray16 load_gray16(const std::filesystem::path& path);

}  // namespace cloudseg
