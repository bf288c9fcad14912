#include "cloudseg/color_channels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "cloudseg/kernels.hpp"

namespace cloudseg {

namespace {

constexpr std::array<std::string_view, kNumChannels> kNames = {
    "R", "G", "B", "H", "S", "V", "Y", "I", "Q", "L*", "a*", "b*", "R/B", "R-B", "(B-R)/(B+R)", "C"};

// Linear sRGB -> XYZ (D65). The reference white is taken as the row sums so that every
// neutral gray maps to a* = b* = 0 up to rounding.
constexpr double kM[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}};
constexpr double kWhiteX = kM[0][0] + kM[0][1] + kM[0][2];
constexpr double kWhiteY = kM[1][0] + kM[1][1] + kM[1][2];
constexpr double kWhiteZ = kM[2][0] + kM[2][1] + kM[2][2];

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

const std::array<ChannelId, kNumChannels>& all_channels() {
    static const std::array<ChannelId, kNumChannels> ids = [] {
        std::array<ChannelId, kNumChannels> out{};
        for (int i = 0; i < kNumChannels; ++i) out[i] = static_cast<ChannelId>(i + 1);
        return out;
    }();
    return ids;
}

ChannelId channel_from_number(int number) {
    if (number < 1 || number > kNumChannels) throw ValidationError("invalid channel");
    return static_cast<ChannelId>(number);
}

std::string channel_tag(ChannelId id) { return "c" + std::to_string(static_cast<int>(id)); }

std::string_view channel_name(ChannelId id) {
    return kNames[static_cast<std::size_t>(channel_index(channel_from_number(static_cast<int>(id))))];
}

ChannelId parse_channel(std::string_view text) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == 'c' || digits.front() == 'C') && digits.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(digits[1]))) {
        digits.remove_prefix(1);
    }
    int number = 0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), number);
    if (ec == std::errc{} && end == digits.data() + digits.size()) return channel_from_number(number);

    for (int i = 0; i < kNumChannels; ++i) {
        if (kNames[static_cast<std::size_t>(i)] == text) return static_cast<ChannelId>(i + 1);
    }
    throw ValidationError("invalid channel '" + std::string(text) + "'");
}

std::vector<ChannelId> parse_channel_list(std::string_view comma_separated) {
    std::vector<ChannelId> out;
    while (!comma_separated.empty()) {
        auto comma = comma_separated.find(',');
        auto item = comma_separated.substr(0, comma);
        if (!item.empty()) out.push_back(parse_channel(item));
        if (comma == std::string_view::npos) break;
        comma_separated.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ValidationError("empty channel list");
    return out;
}

std::string format_channel_list(std::span<const ChannelId> channels) {
    std::string out;
    for (ChannelId id : channels) {
        if (!out.empty()) out += ',';
        out += channel_tag(id);
    }
    return out;
}

Hsv to_hsv(const Rgb& p) {
    const double mx = std::max({p.r, p.g, p.b});
    const double mn = std::min({p.r, p.g, p.b});
    const double chroma = mx - mn;

    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? chroma / mx : 0.0;
    if (chroma > 0.0) {
        double h = 0.0;
        if (mx == p.r) {
            h = (p.g - p.b) / chroma;
            if (h < 0.0) h += 6.0;
        } else if (mx == p.g) {
            h = (p.b - p.r) / chroma + 2.0;
        } else {
            h = (p.r - p.g) / chroma + 4.0;
        }
        out.h = h / 6.0;
        if (out.h >= 1.0) out.h -= 1.0;
    }
    return out;
}

Yiq to_yiq(const Rgb& p) {
    return {0.299 * p.r + 0.587 * p.g + 0.114 * p.b,
            0.596 * p.r - 0.274 * p.g - 0.322 * p.b,
            0.211 * p.r - 0.523 * p.g + 0.312 * p.b};
}

Lab to_lab(const Rgb& p) {
    const double r = srgb_to_linear(p.r);
    const double g = srgb_to_linear(p.g);
    const double b = srgb_to_linear(p.b);

    const double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
    const double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
    const double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double channel_value(const Rgb& p, ChannelId id) {
    switch (id) {
        case ChannelId::red: return p.r;
        case ChannelId::green: return p.g;
        case ChannelId::blue: return p.b;
        case ChannelId::hue: return to_hsv(p).h;
        case ChannelId::saturation: return to_hsv(p).s;
        case ChannelId::value: return to_hsv(p).v;
        case ChannelId::luma: return to_yiq(p).y;
        case ChannelId::inphase: return to_yiq(p).i;
        case ChannelId::quadrature: return to_yiq(p).q;
        case ChannelId::lightness: return to_lab(p).l;
        case ChannelId::lab_a: return to_lab(p).a;
        case ChannelId::lab_b: return to_lab(p).b;
        case ChannelId::red_blue_ratio: return p.r / (p.b + kRatioEpsilon);
        case ChannelId::red_minus_blue: return p.r - p.b;
        case ChannelId::normalized_blue_red: return (p.b - p.r) / (p.b + p.r + kRatioEpsilon);
        case ChannelId::chroma: return std::max({p.r, p.g, p.b}) - std::min({p.r, p.g, p.b});
    }
    throw ValidationError("invalid channel");
}

std::array<double, kNumChannels> channel_values(const Rgb& p) {
    const Hsv hsv = to_hsv(p);
    const Yiq yiq = to_yiq(p);
    const Lab lab = to_lab(p);
    return {p.r,
            p.g,
            p.b,
            hsv.h,
            hsv.s,
            hsv.v,
            yiq.y,
            yiq.i,
            yiq.q,
            lab.l,
            lab.a,
            lab.b,
            p.r / (p.b + kRatioEpsilon),
            p.r - p.b,
            (p.b - p.r) / (p.b + p.r + kRatioEpsilon),
            std::max({p.r, p.g, p.b}) - std::min({p.r, p.g, p.b})};
}

ChannelMap extract_channel(const Image& img, ChannelId ch) {
    channel_from_number(static_cast<int>(ch));
    ChannelMap out;
    out.width = img.width();
    out.height = img.height();
    out.channel = ch;
    out.values = kernels::parallel::channel_map(img, ch);
    return out;
}

ChannelStack extract_stack(const Image& img) { return kernels::parallel::channel_stack(img); }

}  // namespace cloudseg
