#include "cloudseg/persistence.hpp"

#include <algorithm>
#include <cmath>

#include "cloudseg/dataset_io.hpp"
#include "cloudseg/image_io.hpp"
#include "cloudseg/report.hpp"

namespace cloudseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_version(const json& doc, int expected, const std::string& what) {
    if (!doc.is_object() || !doc.contains("version")) throw ValidationError(what + ": missing field 'version'");
    const auto found = doc.at("version");
    if (!found.is_number_integer() || found.get<int>() != expected) {
        throw ValidationError(what + " version mismatch: expected " + std::to_string(expected) + ", found " +
                              found.dump());
    }
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_json_vector(const json& arr, const char* field) {
    if (!arr.is_array()) throw ValidationError(std::string("model field '") + field + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

std::uint16_t quantize16(double unit) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 65535.0));
}

}  // namespace

json model_to_json(const PlsModel& model) {
    json channels = json::array();
    for (ChannelId id : model.channel_ids) channels.push_back(channel_tag(id));
    return {{"version", kModelVersion},
            {"channel_ids", channels},
            {"num_components", model.num_components},
            {"coefficients", to_vector(model.coefficients)},
            {"x_means", to_vector(model.x_means)},
            {"y_mean", model.y_mean},
            {"training_meta", model.training_meta}};
}

PlsModel model_from_json(const json& doc) {
    check_version(doc, kModelVersion, "model");
    PlsModel model;
    try {
        for (const auto& c : doc.at("channel_ids")) model.channel_ids.push_back(parse_channel(c.get<std::string>()));
        model.num_components = doc.at("num_components").get<int>();
        model.coefficients = from_json_vector(doc.at("coefficients"), "coefficients");
        model.x_means = from_json_vector(doc.at("x_means"), "x_means");
        model.y_mean = doc.at("y_mean").get<double>();
        model.training_meta = doc.value("training_meta", json::object());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model: ") + e.what());
    }
    model.validate();
    return model;
}

void save_model(const PlsModel& model, const fs::path& path, bool force) {
    model.validate();
    // nlohmann/json writes the shortest representation that parses back to the same double.
    write_text_file(path, model_to_json(model).dump(2) + "\n", force);
}

PlsModel load_model(const fs::path& path) { return model_from_json(read_json_file(path)); }

fs::path sidecar_path(const fs::path& png) { return fs::path(png.string() + ".json"); }

void save_probability_map(const ProbabilityMap& prob, const fs::path& png, bool force) {
    ensure_writable(sidecar_path(png), force);
    Gray16 raster{prob.width, prob.height, std::vector<std::uint16_t>(prob.values.size())};
    std::transform(prob.values.begin(), prob.values.end(), raster.values.begin(), quantize16);
    save_gray16(raster, png, force);
    const json side = {{"version", kRasterSidecarVersion}, {"kind", "probability"}, {"width", prob.width},
                       {"height", prob.height},           {"scale", 65535},       {"degenerate", prob.degenerate}};
    write_text_file(sidecar_path(png), side.dump(2) + "\n", force);
}

ProbabilityMap load_probability_map(const fs::path& png) {
    const Gray16 raster = load_gray16(png);
    ProbabilityMap prob;
    prob.width = raster.width;
    prob.height = raster.height;
    prob.values.resize(raster.values.size());
    std::transform(raster.values.begin(), raster.values.end(), prob.values.begin(),
                   [](std::uint16_t v) { return v / 65535.0; });
    if (fs::exists(sidecar_path(png))) {
        const json side = read_json_file(sidecar_path(png));
        check_version(side, kRasterSidecarVersion, "probability sidecar");
        prob.degenerate = side.value("degenerate", false);
    }
    return prob;
}

void save_channel_map(const ChannelMap& map, const fs::path& png, bool force) {
    ensure_writable(sidecar_path(png), force);
    if (map.values.empty()) throw ValidationError("empty channel map");
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double range = hi > lo ? hi - lo : 1.0;

    Gray16 raster{map.width, map.height, std::vector<std::uint16_t>(map.values.size())};
    std::transform(map.values.begin(), map.values.end(), raster.values.begin(),
                   [&](double v) { return quantize16((v - lo) / range); });
    save_gray16(raster, png, force);
    const json side = {{"version", kRasterSidecarVersion}, {"kind", "channel"},     {"channel", channel_tag(map.channel)},
                       {"width", map.width},               {"height", map.height}, {"min", lo},
                       {"max", hi}};
    write_text_file(sidecar_path(png), side.dump(2) + "\n", force);
}

ChannelMap load_channel_map(const fs::path& png) {
    const Gray16 raster = load_gray16(png);
    const json side = read_json_file(sidecar_path(png));
    check_version(side, kRasterSidecarVersion, "channel sidecar");
    const double lo = side.at("min").get<double>();
    const double hi = side.at("max").get<double>();

    ChannelMap map;
    map.width = raster.width;
    map.height = raster.height;
    map.channel = parse_channel(side.at("channel").get<std::string>());
    map.values.resize(raster.values.size());
    std::transform(raster.values.begin(), raster.values.end(), map.values.begin(),
                   [&](std::uint16_t v) { return lo + (hi - lo) * (v / 65535.0); });
    return map;
}

}  // namespace cloudseg
