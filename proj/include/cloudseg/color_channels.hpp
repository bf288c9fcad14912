#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cloudseg/image.hpp"

namespace cloudseg {

/// The 16 color channels c1..c16. Underlying values are the 1-based channel numbers.
enum class ChannelId : int {
    red = 1,
    green,
    blue,
    hue,
    saturation,
    value,
    luma,               // Y
    inphase,            // I
    quadrature,         // Q
    lightness,          // L*
    lab_a,              // a*
    lab_b,              // b*
    red_blue_ratio,     // R/B
    red_minus_blue,     // R-B
    normalized_blue_red,  // (B-R)/(B+R)
    chroma,             // max - min
};

inline constexpr int kNumChannels = 16;

/// Added to the denominators of R/B and (B-R)/(B+R).
inline constexpr double kRatioEpsilon = 1e-4;

const std::array<ChannelId, kNumChannels>& all_channels();

/// Column index (0-based) of a channel inside a stack.
inline int channel_index(ChannelId id) { return static_cast<int>(id) - 1; }

/// 1-based channel number to id; throws ValidationError("invalid channel") otherwise.
ChannelId channel_from_number(int number);

/// "c15"
std::string channel_tag(ChannelId id);
/// "(B-R)/(B+R)"
std::string_view channel_name(ChannelId id);

/// Accepts "c15", "15" or a display name such as "S" or "R/B" (case-sensitive names).
ChannelId parse_channel(std::string_view text);
std::vector<ChannelId> parse_channel_list(std::string_view comma_separated);
std::string format_channel_list(std::span<const ChannelId> channels);

struct Hsv {
    double h = 0.0;  // [0,1], 0 when chroma is 0
    double s = 0.0;
    double v = 0.0;
};

struct Yiq {
    double y = 0.0;
    double i = 0.0;
    double q = 0.0;
};

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

Hsv to_hsv(const Rgb& p);
Yiq to_yiq(const Rgb& p);
Lab to_lab(const Rgb& p);

/// Value of one channel for a single pixel.
double channel_value(const Rgb& p, ChannelId id);

/// All 16 channels of a single pixel in c1..c16 order.
std::array<double, kNumChannels> channel_values(const Rgb& p);

struct ChannelMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    ChannelId channel = ChannelId::red;
};

/// Per-pixel (m*n) x 16 matrix; column j holds channel c_{j+1} flattened row-major.
using ChannelStack = Eigen::MatrixXd;

ChannelMap extract_channel(const Image& img, ChannelId ch);
ChannelStack extract_stack(const Image& img);

}  // namespace cloudseg
