#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "cloudseg/image.hpp"

namespace cloudseg {

enum class BaselineMethod { long_ratio, souza_saturation, li_hybrid };

std::string method_name(BaselineMethod m);
BaselineMethod parse_method(const std::string& name);

struct BaselineConfig {
    BaselineMethod method = BaselineMethod::long_ratio;
    double fixed_threshold = 0.6;
    double hybrid_std_cutoff = 0.03;

    static BaselineConfig defaults(BaselineMethod method);
    void validate() const;
};

/// Thresholds for every method, e.g. from a `--baseline-config` JSON file with fields
/// long_threshold, souza_threshold, li_fixed_threshold, li_std_cutoff.
struct BaselineSettings {
    BaselineConfig long_ratio = BaselineConfig::defaults(BaselineMethod::long_ratio);
    BaselineConfig souza = BaselineConfig::defaults(BaselineMethod::souza_saturation);
    BaselineConfig li = BaselineConfig::defaults(BaselineMethod::li_hybrid);

    static BaselineSettings from_json(const nlohmann::json& doc);
    const BaselineConfig& for_method(BaselineMethod m) const;
};

inline constexpr int kOtsuBins = 256;

/// Cloud iff R/(B+eps) >= thresh.
Mask long_ratio(const Image& img, double thresh = 0.6);

/// Cloud iff S <= thresh.
Mask souza_saturation(const Image& img, double thresh = 0.2);

struct HybridResult {
    Mask mask;
    bool adaptive = false;
    double threshold = 0.0;  // applied to (B-R)/(B+R+eps); cloud iff value <= threshold
    double std_dev = 0.0;
};

/// Histogram bin of a normalized blue/red value over [-1, 1].
int otsu_bin_of(double value);

/// Index of the last bin of the lower class maximising between-class variance; the first
/// maximiser wins ties. Returns -1 for an empty or single-valued histogram.
int otsu_split(std::span<const std::uint64_t> histogram);

/// Upper edge of an Otsu bin.
double otsu_bin_upper_edge(int bin);

/// Fixed threshold when the image's normalized blue/red std is below the cutoff, Otsu otherwise.
HybridResult li_hybrid_detailed(const Image& img, const BaselineConfig& cfg);
Mask li_hybrid(const Image& img, const BaselineConfig& cfg);

Mask run_baseline(const Image& img, const BaselineConfig& cfg);

}  // namespace cloudseg
