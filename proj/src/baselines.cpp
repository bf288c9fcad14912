#include "cloudseg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cloudseg/color_channels.hpp"

namespace cloudseg {

std::string method_name(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::long_ratio: return "long";
        case BaselineMethod::souza_saturation: return "souza";
        case BaselineMethod::li_hybrid: return "li";
    }
    return "unknown";
}

BaselineMethod parse_method(const std::string& name) {
    if (name == "long") return BaselineMethod::long_ratio;
    if (name == "souza") return BaselineMethod::souza_saturation;
    if (name == "li") return BaselineMethod::li_hybrid;
    throw ValidationError("unknown baseline method '" + name + "'");
}

BaselineConfig BaselineConfig::defaults(BaselineMethod method) {
    switch (method) {
        case BaselineMethod::long_ratio: return {method, 0.6, 0.03};
        case BaselineMethod::souza_saturation: return {method, 0.2, 0.03};
        case BaselineMethod::li_hybrid: return {method, 0.25, 0.03};
    }
    return {};
}

void BaselineConfig::validate() const {
    switch (method) {
        case BaselineMethod::long_ratio:
            if (!(fixed_threshold >= 0.0 && std::isfinite(fixed_threshold))) {
                throw ValidationError("long threshold must be >= 0");
            }
            break;
        case BaselineMethod::souza_saturation:
            if (!(fixed_threshold >= 0.0 && fixed_threshold <= 1.0)) throw ValidationError("souza threshold must be in [0,1]");
            break;
        case BaselineMethod::li_hybrid:
            if (!(fixed_threshold >= -1.0 && fixed_threshold <= 1.0)) throw ValidationError("li threshold must be in [-1,1]");
            if (!(hybrid_std_cutoff > 0.0)) throw ValidationError("hybrid std cutoff must be > 0");
            break;
    }
}

BaselineSettings BaselineSettings::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("baseline config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "long_threshold" && key != "souza_threshold" && key != "li_fixed_threshold" && key != "li_std_cutoff") {
            throw ValidationError("unknown baseline config field '" + key + "'");
        }
        if (!value.is_number()) throw ValidationError("baseline config field '" + key + "' must be a number");
    }
    BaselineSettings s;
    s.long_ratio.fixed_threshold = doc.value("long_threshold", s.long_ratio.fixed_threshold);
    s.souza.fixed_threshold = doc.value("souza_threshold", s.souza.fixed_threshold);
    s.li.fixed_threshold = doc.value("li_fixed_threshold", s.li.fixed_threshold);
    s.li.hybrid_std_cutoff = doc.value("li_std_cutoff", s.li.hybrid_std_cutoff);
    s.long_ratio.validate();
    s.souza.validate();
    s.li.validate();
    return s;
}

const BaselineConfig& BaselineSettings::for_method(BaselineMethod m) const {
    switch (m) {
        case BaselineMethod::long_ratio: return long_ratio;
        case BaselineMethod::souza_saturation: return souza;
        case BaselineMethod::li_hybrid: return li;
    }
    return long_ratio;
}

Mask long_ratio(const Image& img, double thresh) {
    Mask out(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        out.labels[i] = channel_value(px[i], ChannelId::red_blue_ratio) >= thresh ? 1 : 0;
    }
    return out;
}

Mask souza_saturation(const Image& img, double thresh) {
    Mask out(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) out.labels[i] = to_hsv(px[i]).s <= thresh ? 1 : 0;
    return out;
}

int otsu_bin_of(double value) {
    const int bin = static_cast<int>(std::floor((value + 1.0) / 2.0 * kOtsuBins));
    return std::clamp(bin, 0, kOtsuBins - 1);
}

double otsu_bin_upper_edge(int bin) { return -1.0 + 2.0 * (bin + 1) / kOtsuBins; }

int otsu_split(std::span<const std::uint64_t> histogram) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t b = 0; b < histogram.size(); ++b) {
        total += static_cast<double>(histogram[b]);
        weighted += static_cast<double>(b) * static_cast<double>(histogram[b]);
    }
    if (total == 0.0) return -1;

    int best = -1;
    double best_between = 0.0;
    double w0 = 0.0;
    double sum0 = 0.0;
    for (std::size_t b = 0; b + 1 < histogram.size(); ++b) {
        w0 += static_cast<double>(histogram[b]);
        sum0 += static_cast<double>(b) * static_cast<double>(histogram[b]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (weighted - sum0) / w1;
        const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best_between) {
            best_between = between;
            best = static_cast<int>(b);
        }
    }
    return best;
}

HybridResult li_hybrid_detailed(const Image& img, const BaselineConfig& cfg) {
    cfg.validate();
    const auto px = img.pixels();
    std::vector<double> n(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) n[i] = channel_value(px[i], ChannelId::normalized_blue_red);

    double mean = 0.0;
    for (double v : n) mean += v;
    mean /= static_cast<double>(n.size());
    double ss = 0.0;
    for (double v : n) ss += (v - mean) * (v - mean);
    const double sd = n.size() > 1 ? std::sqrt(ss / static_cast<double>(n.size() - 1)) : 0.0;

    HybridResult result;
    result.mask = Mask(img.width(), img.height());
    result.std_dev = sd;
    if (sd < cfg.hybrid_std_cutoff) {
        result.threshold = cfg.fixed_threshold;
        for (std::size_t i = 0; i < n.size(); ++i) result.mask.labels[i] = n[i] <= cfg.fixed_threshold ? 1 : 0;
        return result;
    }

    std::vector<std::uint64_t> hist(kOtsuBins, 0);
    for (double v : n) ++hist[static_cast<std::size_t>(otsu_bin_of(v))];
    const int split = otsu_split(hist);
    result.adaptive = true;
    if (split < 0) {
        // Spread-out values that still land in one bin: fall back to the fixed threshold.
        result.adaptive = false;
        result.threshold = cfg.fixed_threshold;
        for (std::size_t i = 0; i < n.size(); ++i) result.mask.labels[i] = n[i] <= cfg.fixed_threshold ? 1 : 0;
        return result;
    }
    result.threshold = otsu_bin_upper_edge(split);
    for (std::size_t i = 0; i < n.size(); ++i) result.mask.labels[i] = otsu_bin_of(n[i]) <= split ? 1 : 0;
    return result;
}

Mask li_hybrid(const Image& img, const BaselineConfig& cfg) { return li_hybrid_detailed(img, cfg).mask; }

Mask run_baseline(const Image& img, const BaselineConfig& cfg) {
    cfg.validate();
    switch (cfg.method) {
        case BaselineMethod::long_ratio: return long_ratio(img, cfg.fixed_threshold);
        case BaselineMethod::souza_saturation: return souza_saturation(img, cfg.fixed_threshold);
        case BaselineMethod::li_hybrid: return li_hybrid(img, cfg);
    }
    throw ValidationError("unknown baseline method");
}

}  // namespace cloudseg
