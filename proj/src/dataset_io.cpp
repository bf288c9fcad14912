#include "cloudseg/dataset_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cloudseg/image_io.hpp"
#include "cloudseg/report.hpp"

namespace cloudseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string entry_label(std::size_t i, const std::string& image) {
    return "entry " + std::to_string(i) + " (" + image + ")";
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    if (!obj.at(key).is_number()) throw ValidationError(where + ": metadata field '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

bool is_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

fs::path DatasetManifest::image_file(std::size_t i) const { return root / entries.at(i).image_path; }

fs::path DatasetManifest::mask_file(std::size_t i) const {
    const auto& e = entries.at(i);
    if (!e.mask_path) throw ValidationError("training requires masks: " + entry_label(i, e.image_path) + " has none");
    return root / *e.mask_path;
}

void DatasetManifest::require_masks() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!entries[i].mask_path) {
            throw ValidationError("training requires masks: " + entry_label(i, entries[i].image_path) + " has none");
        }
    }
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError("parse error in " + path.string() + " at byte " + std::to_string(e.byte));
    }
}

DatasetManifest manifest_from_json(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw ValidationError("manifest must be a JSON object");
    if (doc.contains("version") && doc.at("version") != kManifestVersion) {
        throw ValidationError("manifest version mismatch: expected " + std::to_string(kManifestVersion) + ", found " +
                              doc.at("version").dump());
    }
    if (!doc.contains("entries") || !doc.at("entries").is_array()) {
        throw ValidationError("manifest missing field 'entries'");
    }

    DatasetManifest m;
    m.name = doc.value("name", std::string{});
    fs::path root = doc.contains("root") ? fs::path(doc.at("root").get<std::string>()) : fs::path(".");
    if (const char* env = std::getenv("CLOUDSEG_DATA_ROOT"); env && *env) root = env;
    m.root = root.is_absolute() ? root : (base_dir / root).lexically_normal();

    std::size_t i = 0;
    for (const auto& e : doc.at("entries")) {
        const std::string where = "entry " + std::to_string(i);
        if (!e.is_object() || !e.contains("image_path") || !e.at("image_path").is_string()) {
            throw ValidationError(where + ": missing field 'image_path'");
        }
        ManifestEntry entry;
        entry.image_path = e.at("image_path").get<std::string>();
        if (e.contains("mask_path") && !e.at("mask_path").is_null()) entry.mask_path = e.at("mask_path").get<std::string>();
        if (e.contains("metadata") && e.at("metadata").is_object()) {
            const auto& md = e.at("metadata");
            const auto label = entry_label(i, entry.image_path);
            entry.metadata.time_of_day = optional_number(md, "time_of_day", label);
            entry.metadata.cloud_coverage = optional_number(md, "cloud_coverage", label);
            entry.metadata.sun_distance = optional_number(md, "sun_distance", label);
        }
        m.entries.push_back(std::move(entry));
        ++i;
    }
    if (doc.contains("split") && doc.at("split").is_object()) {
        m.split = SplitSizes{doc.at("split").at("train").get<int>(), doc.at("split").at("test").get<int>()};
    }
    return m;
}

json manifest_to_json(const DatasetManifest& manifest) {
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        json je = {{"image_path", e.image_path}};
        if (e.mask_path) je["mask_path"] = *e.mask_path;
        json md = json::object();
        if (e.metadata.time_of_day) md["time_of_day"] = *e.metadata.time_of_day;
        if (e.metadata.cloud_coverage) md["cloud_coverage"] = *e.metadata.cloud_coverage;
        if (e.metadata.sun_distance) md["sun_distance"] = *e.metadata.sun_distance;
        if (!md.empty()) je["metadata"] = md;
        entries.push_back(std::move(je));
    }
    json doc = {{"version", kManifestVersion}, {"name", manifest.name}, {"root", manifest.root.generic_string()},
                {"entries", entries}};
    if (manifest.split) doc["split"] = {{"train", manifest.split->train}, {"test", manifest.split->test}};
    return doc;
}

void validate_manifest(const DatasetManifest& manifest, bool check_files) {
    if (manifest.entries.empty()) throw ValidationError("empty manifest");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        const auto label = entry_label(i, e.image_path);
        if (e.image_path.empty()) throw ValidationError(label + ": empty image_path");
        if (!seen.insert(fs::path(e.image_path).lexically_normal().generic_string()).second) {
            throw ValidationError(label + ": duplicate image_path");
        }
        if (e.metadata.cloud_coverage && !(*e.metadata.cloud_coverage >= 0.0 && *e.metadata.cloud_coverage <= 1.0)) {
            throw ValidationError(label + ": cloud_coverage outside [0,1]");
        }
        if (e.metadata.sun_distance && !(*e.metadata.sun_distance >= 0.0)) {
            throw ValidationError(label + ": sun_distance must be >= 0");
        }
        if (e.metadata.time_of_day && !(*e.metadata.time_of_day >= 0.0 && *e.metadata.time_of_day < 1440.0)) {
            throw ValidationError(label + ": time_of_day must be minutes in [0,1440)");
        }
        if (check_files) {
            if (!fs::exists(manifest.image_file(i))) {
                throw IoError(label + ": image not found at " + manifest.image_file(i).string());
            }
            if (e.mask_path && !fs::exists(manifest.root / *e.mask_path)) {
                throw IoError(label + ": mask not found at " + (manifest.root / *e.mask_path).string());
            }
        }
    }
    if (manifest.split) {
        const auto& s = *manifest.split;
        if (s.train < 1 || s.test < 1 || static_cast<std::size_t>(s.train + s.test) > manifest.entries.size()) {
            throw ValidationError("split sizes must be >= 1 and fit the manifest");
        }
    }
}

DatasetManifest load_manifest(const fs::path& path, bool check_files) {
    if (!fs::exists(path)) throw IoError("manifest not found: " + path.string());
    auto manifest = manifest_from_json(read_json_file(path), path.parent_path());
    validate_manifest(manifest, check_files);
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path, bool force) {
    DatasetManifest copy = manifest;
    const fs::path dir = fs::absolute(path).parent_path();
    const fs::path root = fs::absolute(manifest.root).lexically_normal();
    const fs::path rel = root.lexically_relative(dir);
    copy.root = rel.empty() ? root : rel;
    write_text_file(path, manifest_to_json(copy).dump(2) + "\n", force);
}

DatasetManifest manifest_from_directory(const fs::path& dir, const std::string& name, const std::string& gt_suffix) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& item : fs::directory_iterator(dir)) {
        if (item.is_regular_file() && is_image_extension(item.path())) files.push_back(item.path());
    }
    std::sort(files.begin(), files.end());

    DatasetManifest m;
    m.name = name;
    m.root = dir;
    for (const auto& f : files) {
        const std::string stem = f.stem().string();
        if (stem.size() >= gt_suffix.size() && stem.compare(stem.size() - gt_suffix.size(), gt_suffix.size(), gt_suffix) == 0) {
            continue;
        }
        ManifestEntry e;
        e.image_path = f.filename().string();
        for (const char* ext : {".png", ".PNG", ".jpg", ".jpeg", ".bmp"}) {
            const fs::path candidate = dir / (stem + gt_suffix + ext);
            if (fs::exists(candidate)) {
                e.mask_path = candidate.filename().string();
                break;
            }
        }
        m.entries.push_back(std::move(e));
    }
    validate_manifest(m, true);
    return m;
}

SplitSizes resolve_split(const DatasetManifest& manifest) {
    if (manifest.split) return *manifest.split;
    const int n = static_cast<int>(manifest.size());
    std::string lower = manifest.name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "hyta" && n >= 32) return {17, 15};
    if (lower == "swimseg" && n >= 1013) return {500, 513};
    if (n < 2) throw ValidationError("need at least 2 images for a train/test split");
    return {n - n / 2, n / 2};
}

LoadedSample load_sample(const DatasetManifest& manifest, std::size_t i, std::optional<int> binarize_gt) {
    LoadedSample s{load_image(manifest.image_file(i)), load_mask(manifest.mask_file(i), binarize_gt)};
    require_same_shape(s.image.width(), s.image.height(), s.mask.width, s.mask.height,
                       ("mask vs image for " + manifest.entries[i].image_path).c_str());
    return s;
}

}  // namespace cloudseg
