#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cloudseg/error.hpp"

namespace cloudseg {

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

/// Row-major sRGB raster with components in [0,1].
class Image {
public:
    Image() = default;
    Image(int width, int height);
    Image(int width, int height, std::vector<Rgb> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    std::span<const Rgb> pixels() const noexcept { return pixels_; }
    std::span<Rgb> pixels() noexcept { return pixels_; }

    const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
    Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

    /// Throws ValidationError unless every component is finite and in [0,1].
    void validate() const;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

/// Per-pixel binary labels: 0 = sky, 1 = cloud. Used for ground truth and predictions alike.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;

    Mask() = default;
    Mask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t count_cloud() const noexcept;
    double coverage() const noexcept;
};

using GroundTruthMask = Mask;

/// Per-pixel cloud belongingness in [0,1].
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    bool degenerate = false;
};

void require_same_shape(int w1, int h1, int w2, int h2, const char* what);

}  // namespace cloudseg
