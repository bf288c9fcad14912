#include "cloudseg/image_io.hpp"

#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "cloudseg/report.hpp"

namespace cloudseg {

namespace {

cv::Mat read_raw(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("file not found: " + path.string());
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED | cv::IMREAD_IGNORE_ORIENTATION);
    if (m.empty()) throw IoError("unsupported or unreadable image: " + path.string());
    return m;
}

void write_raw(const cv::Mat& m, const std::filesystem::path& path, bool force) {
    ensure_writable(path, force);
    auto ext = path.extension().string();
    if (ext != ".png" && ext != ".PNG") throw ValidationError("output must be a .png file: " + path.string());
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), m);
    } catch (const cv::Exception& e) {
        throw IoError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw IoError("cannot write " + path.string());
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

Image load_image(const std::filesystem::path& path) {
    const cv::Mat m = read_raw(path);
    double scale = 0.0;
    switch (m.depth()) {
        case CV_8U: scale = 1.0 / 255.0; break;
        case CV_16U: scale = 1.0 / 65535.0; break;
        default: throw IoError("unsupported sample depth in " + path.string());
    }
    const int channels = m.channels();
    if (channels != 1 && channels != 3 && channels != 4) {
        throw IoError("unsupported channel count in " + path.string());
    }

    Image img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        for (int x = 0; x < m.cols; ++x) {
            double s[3] = {0.0, 0.0, 0.0};
            for (int c = 0; c < std::min(channels, 3); ++c) {
                const std::size_t offset = static_cast<std::size_t>(x) * channels + c;
                s[c] = m.depth() == CV_8U ? m.ptr<std::uint8_t>(y)[offset] * scale
                                          : m.ptr<std::uint16_t>(y)[offset] * scale;
            }
            Rgb& p = img.at(x, y);
            if (channels == 1) {
                p = {s[0], s[0], s[0]};
            } else {
                p = {s[2], s[1], s[0]};  // OpenCV stores BGR
            }
        }
    }
    return img;
}

Mask load_mask(const std::filesystem::path& path, std::optional<int> binarize_threshold) {
    const cv::Mat m = read_raw(path);
    if (m.depth() != CV_8U) throw IoError("mask must be 8-bit: " + path.string());
    const int channels = m.channels();

    Mask mask(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            const int v = row[static_cast<std::size_t>(x) * channels];
            for (int c = 1; c < std::min(channels, 3); ++c) {
                if (row[static_cast<std::size_t>(x) * channels + c] != v && !binarize_threshold) {
                    throw ValidationError("non-binary mask: " + path.string() + " (colour pixels)");
                }
            }
            std::uint8_t label = 0;
            if (binarize_threshold) {
                label = v >= *binarize_threshold ? 1 : 0;
            } else if (v == 255) {
                label = 1;
            } else if (v != 0) {
                throw ValidationError("non-binary mask: " + path.string() + " contains value " + std::to_string(v) +
                                      " at (" + std::to_string(x) + "," + std::to_string(y) + ")");
            }
            mask.labels[static_cast<std::size_t>(y) * m.cols + x] = label;
        }
    }
    return mask;
}

void save_image(const Image& img, const std::filesystem::path& path, bool force) {
    cv::Mat m(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            const Rgb& p = img.at(x, y);
            row[3 * x + 0] = to_byte(p.b);
            row[3 * x + 1] = to_byte(p.g);
            row[3 * x + 2] = to_byte(p.r);
        }
    }
    write_raw(m, path, force);
}

void save_mask(const Mask& mask, const std::filesystem::path& path, bool force) {
    cv::Mat m(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width; ++x) {
            row[x] = mask.labels[static_cast<std::size_t>(y) * mask.width + x] ? 255 : 0;
        }
    }
    write_raw(m, path, force);
}

void save_gray16(const Gray16& raster, const std::filesystem::path& path, bool force) {
    cv::Mat m(raster.height, raster.width, CV_16UC1);
    for (int y = 0; y < raster.height; ++y) {
        auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < raster.width; ++x) row[x] = raster.values[static_cast<std::size_t>(y) * raster.width + x];
    }
    write_raw(m, path, force);
}

Gray16 load_gray16(const std::filesystem::path& path) {
    const cv::Mat m = read_raw(path);
    if (m.depth() != CV_16U || m.channels() != 1) throw IoError("expected a 16-bit grayscale PNG: " + path.string());
    Gray16 out{m.cols, m.rows, std::vector<std::uint16_t>(static_cast<std::size_t>(m.cols) * m.rows)};
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < m.cols; ++x) out.values[static_cast<std::size_t>(y) * m.cols + x] = row[x];
    }
    return out;
}

}  // namespace cloudseg
