#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "cloudseg/color_channels.hpp"
#include "cloudseg/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cloudseg;
using testsupport::kReferences;
namespace oracle = testsupport::oracle;

TEST(ColorChannels, LabMatchesIndependentFormulas) {
    for (const auto& ref : kReferences) {
        const Rgb p{ref.rgb[0], ref.rgb[1], ref.rgb[2]};
        const Lab lab = to_lab(p);
        const auto want = oracle::lab(p.r, p.g, p.b);
        EXPECT_NEAR(lab.l, want[0], 1e-3);
        EXPECT_NEAR(lab.a, want[1], 1e-3);
        EXPECT_NEAR(lab.b, want[2], 1e-3);
        // Third-party values with a marginally different matrix.
        EXPECT_NEAR(lab.l, ref.lab[0], 2e-2);
        EXPECT_NEAR(lab.a, ref.lab[1], 2e-2);
        EXPECT_NEAR(lab.b, ref.lab[2], 2e-2);
    }
}

TEST(ColorChannels, LabInvertsBackToInput) {
    for (const auto& ref : kReferences) {
        const Lab lab = to_lab({ref.rgb[0], ref.rgb[1], ref.rgb[2]});
        const auto rgb = oracle::lab_to_srgb(lab.l, lab.a, lab.b);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(rgb[c], ref.rgb[c], 1e-3);
    }
}

TEST(ColorChannels, HsvMatchesReferenceAndInverts) {
    for (const auto& ref : kReferences) {
        const Hsv hsv = to_hsv({ref.rgb[0], ref.rgb[1], ref.rgb[2]});
        EXPECT_NEAR(hsv.h, ref.hsv[0], 1e-6);
        EXPECT_NEAR(hsv.s, ref.hsv[1], 1e-6);
        EXPECT_NEAR(hsv.v, ref.hsv[2], 1e-6);
        const auto want = oracle::hsv(ref.rgb[0], ref.rgb[1], ref.rgb[2]);
        EXPECT_NEAR(hsv.h, want[0], 1e-12);
        const auto rgb = oracle::hsv_to_srgb(hsv.h, hsv.s, hsv.v);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(rgb[c], ref.rgb[c], 1e-9);
    }
}

TEST(ColorChannels, SpecLabExample) {
    const Lab lab = to_lab({0.2, 0.4, 0.6});
    const auto want = oracle::lab(0.2, 0.4, 0.6);
    EXPECT_NEAR(lab.l, want[0], 1e-3);
    EXPECT_NEAR(lab.a, want[1], 1e-3);
    EXPECT_NEAR(lab.b, want[2], 1e-3);
}

TEST(ColorChannels, AchromaticRampZeroesOpponentChannels) {
    for (int i = 0; i <= 100; ++i) {
        const double v = i / 100.0;
        const auto c = channel_values({v, v, v});
        EXPECT_EQ(c[channel_index(ChannelId::saturation)], 0.0);
        EXPECT_EQ(c[channel_index(ChannelId::chroma)], 0.0);
        EXPECT_EQ(c[channel_index(ChannelId::red_minus_blue)], 0.0);
        EXPECT_EQ(c[channel_index(ChannelId::normalized_blue_red)], 0.0);
        EXPECT_EQ(c[channel_index(ChannelId::hue)], 0.0);
        EXPECT_NEAR(c[channel_index(ChannelId::lab_a)], 0.0, 1e-6);
        EXPECT_NEAR(c[channel_index(ChannelId::lab_b)], 0.0, 1e-6);
        EXPECT_NEAR(c[channel_index(ChannelId::inphase)], 0.0, 1e-12);
        EXPECT_NEAR(c[channel_index(ChannelId::quadrature)], 0.0, 1e-12);
    }
}

TEST(ColorChannels, GrayPixelRow) {
    const auto c = channel_values({0.5, 0.5, 0.5});
    EXPECT_EQ(c[0], 0.5);
    EXPECT_EQ(c[1], 0.5);
    EXPECT_EQ(c[2], 0.5);
    EXPECT_EQ(c[5], 0.5);
    EXPECT_NEAR(c[6], 0.5, 1e-12);  // Y of gray is the gray level
    EXPECT_NEAR(c[9], oracle::lab(0.5, 0.5, 0.5)[0], 1e-3);
    EXPECT_NEAR(c[12], 0.5 / (0.5 + kRatioEpsilon), 1e-15);
}

TEST(ColorChannels, SkyBluePixel) {
    const Rgb p{0.1, 0.3, 0.9};
    EXPECT_NEAR(channel_value(p, ChannelId::red_blue_ratio), 0.1 / (0.9 + kRatioEpsilon), 1e-15);
    EXPECT_NEAR(channel_value(p, ChannelId::red_minus_blue), -0.8, 1e-15);
    EXPECT_NEAR(channel_value(p, ChannelId::normalized_blue_red), 0.8 / (1.0 + kRatioEpsilon), 1e-15);
    EXPECT_NEAR(channel_value(p, ChannelId::chroma), 0.8, 1e-15);
    EXPECT_NEAR(channel_value(p, ChannelId::saturation), 0.8 / 0.9, 1e-15);
}

TEST(ColorChannels, BlackPixelStaysFinite) {
    const auto c = channel_values({0.0, 0.0, 0.0});
    for (double v : c) EXPECT_TRUE(std::isfinite(v));
    EXPECT_EQ(c[channel_index(ChannelId::red_blue_ratio)], 0.0);
}

TEST(ColorChannels, YiqUsesNtscMatrix) {
    const Yiq yiq = to_yiq({1.0, 0.0, 0.0});
    EXPECT_NEAR(yiq.y, 0.299, 1e-12);
    EXPECT_NEAR(yiq.i, 0.596, 1e-12);
    EXPECT_NEAR(yiq.q, 0.211, 1e-12);
}

TEST(ColorChannels, StackMatchesPerPixelValues) {
    const Image img = testsupport::random_image(7, 5, 11);
    const ChannelStack stack = extract_stack(img);
    ASSERT_EQ(stack.rows(), 35);
    ASSERT_EQ(stack.cols(), kNumChannels);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 7; ++x) {
            const auto c = channel_values(img.at(x, y));
            for (int j = 0; j < kNumChannels; ++j) EXPECT_EQ(stack(y * 7 + x, j), c[j]);
        }
    }
    const ChannelMap map = extract_channel(img, ChannelId::lab_b);
    EXPECT_EQ(map.width, 7);
    EXPECT_EQ(map.height, 5);
    for (int i = 0; i < 35; ++i) EXPECT_EQ(map.values[i], stack(i, channel_index(ChannelId::lab_b)));
}

TEST(ColorChannels, ChannelParsing) {
    EXPECT_EQ(parse_channel("c15"), ChannelId::normalized_blue_red);
    EXPECT_EQ(parse_channel("15"), ChannelId::normalized_blue_red);
    EXPECT_EQ(parse_channel("R/B"), ChannelId::red_blue_ratio);
    EXPECT_EQ(parse_channel("S"), ChannelId::saturation);
    EXPECT_THROW(parse_channel("c17"), ValidationError);
    EXPECT_THROW(parse_channel("c0"), ValidationError);
    EXPECT_THROW(channel_from_number(17), ValidationError);
    const auto list = parse_channel_list("c13,c15,c5");
    ASSERT_EQ(list.size(), 3u);
    EXPECT_EQ(format_channel_list(list), "c13,c15,c5");
    for (ChannelId id : all_channels()) EXPECT_EQ(parse_channel(channel_tag(id)), id);
}

TEST(ColorChannels, InvalidImageRejected) {
    Image img(2, 1);
    img.at(1, 0) = {0.5, 1.5, 0.2};
    EXPECT_THROW(img.validate(), ValidationError);
    img.at(1, 0) = {0.5, NAN, 0.2};
    EXPECT_THROW(img.validate(), ValidationError);
}
