#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "cloudseg/dataset_io.hpp"
#include "cloudseg/image.hpp"

namespace cloudseg {

inline constexpr Rgb kSynthSky{0.35, 0.55, 0.85};
inline constexpr Rgb kSynthCloud{0.8, 0.8, 0.82};

struct SynthOptions {
    int images = 20;
    int size = 128;
    double noise_sigma = 0.05;
    std::uint64_t seed = 7;
    /// Cloud fraction per image, cycled; random in [0.15, 0.85] when empty.
    std::vector<double> coverages;

    void validate() const;
};

/// One sample: a smooth random field (sum of Gaussian blobs) thresholded so that exactly
/// round(coverage * size^2) pixels are cloud, coloured sky/cloud plus clamped Gaussian noise.
LoadedSample synthesize_sample(int size, double noise_sigma, double coverage, std::uint64_t seed);

/// Cloud coverage, time of day and sun distance drawn for image i; deterministic in (options, i).
EntryMetadata synth_metadata(const SynthOptions& options, int index);

/// Writes img_NNN.png / img_NNN_GT.png pairs and manifest.json into `out_dir`; returns the manifest.
DatasetManifest make_synthetic_dataset(const SynthOptions& options, const std::filesystem::path& out_dir, bool force);

}  // namespace cloudseg
