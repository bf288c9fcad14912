#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudseg/image.hpp"

namespace cloudseg {

inline constexpr int kManifestVersion = 1;

struct EntryMetadata {
    std::optional<double> time_of_day;     // minutes since midnight
    std::optional<double> cloud_coverage;  // fraction in [0,1]
    std::optional<double> sun_distance;    // degrees
};

struct ManifestEntry {
    std::string image_path;
    std::optional<std::string> mask_path;
    EntryMetadata metadata;
};

struct SplitSizes {
    int train = 0;
    int test = 0;
};

struct DatasetManifest {
    std::string name;
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;
    std::optional<SplitSizes> split;

    std::size_t size() const noexcept { return entries.size(); }
    std::filesystem::path image_file(std::size_t i) const;
    std::filesystem::path mask_file(std::size_t i) const;

    /// Throws ValidationError("training requires masks") if any entry lacks a mask.
    void require_masks() const;
};

/// Parses and validates a manifest JSON file. Relative roots resolve against the manifest's
/// directory; the CLOUDSEG_DATA_ROOT environment variable, when set, replaces the root.
DatasetManifest load_manifest(const std::filesystem::path& path, bool check_files = true);

DatasetManifest manifest_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
nlohmann::json manifest_to_json(const DatasetManifest& manifest);

/// Structural checks (non-empty, unique image paths, metadata ranges) and optional file existence.
void validate_manifest(const DatasetManifest& manifest, bool check_files);

/// Writes the manifest with `root` made relative to the manifest's directory when possible.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path, bool force);

/// Builds a manifest from loose `X.png` / `X<gt_suffix>.png` pairs in a directory (sorted by name).
DatasetManifest manifest_from_directory(const std::filesystem::path& dir, const std::string& name,
                                        const std::string& gt_suffix = "_GT");

/// Train/test sizes: the manifest's own split if present, the published split for HYTA (17/15)
/// and SWIMSEG (500/513) when the name matches, otherwise half/half (train gets the extra image).
SplitSizes resolve_split(const DatasetManifest& manifest);

/// Reads a JSON document; parse failures become ValidationError naming the byte offset.
nlohmann::json read_json_file(const std::filesystem::path& path);

struct LoadedSample {
    Image image;
    Mask mask;
};

/// Loads entry i's image and mask and checks their dimensions agree.
LoadedSample load_sample(const DatasetManifest& manifest, std::size_t i, std::optional<int> binarize_gt = std::nullopt);

}  // namespace cloudseg
