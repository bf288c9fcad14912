#include "cloudseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cloudseg {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw ValidationError("invalid image dimensions " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

Image::Image(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
}

Image::Image(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ValidationError("pixel count does not match image dimensions");
    }
}

void Image::validate() const {
    check_dims(width_, height_);
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const Rgb& p = pixels_[i];
        if (!in_unit(p.r) || !in_unit(p.g) || !in_unit(p.b)) {
            throw ValidationError("pixel " + std::to_string(i) + " outside [0,1]");
        }
    }
}

std::size_t Mask::count_cloud() const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

double Mask::coverage() const noexcept {
    if (labels.empty()) return 0.0;
    return static_cast<double>(count_cloud()) / static_cast<double>(labels.size());
}

void require_same_shape(int w1, int h1, int w2, int h2, const char* what) {
    if (w1 != w2 || h1 != h2) {
        throw ValidationError(std::string("dimension mismatch: ") + what + " (" + std::to_string(w1) +
                              "x" + std::to_string(h1) + " vs " + std::to_string(w2) + "x" +
                              std::to_string(h2) + ")");
    }
}

}  // namespace cloudseg
