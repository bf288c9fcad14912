#include "cloudseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "cloudseg/image_io.hpp"
#include "cloudseg/rng.hpp"

namespace cloudseg {

namespace fs = std::filesystem;

namespace {

constexpr int kBlobs = 6;
// Streams of derive_seed(options.seed, i): pixels and metadata must not share draws.
constexpr std::uint64_t kMetadataStream = 1ULL << 32;

double target_coverage(const SynthOptions& options, int index, Rng& rng) {
    if (!options.coverages.empty()) return options.coverages[static_cast<std::size_t>(index) % options.coverages.size()];
    return rng.uniform(0.15, 0.85);
}

}  // namespace

void SynthOptions::validate() const {
    if (images < 2) throw ValidationError("synthetic dataset needs at least 2 images");
    if (size < 16) throw ValidationError("synthetic image size must be >= 16");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ValidationError("noise sigma must be >= 0");
    for (double c : coverages) {
        if (!(c >= 0.0 && c <= 1.0)) throw ValidationError("coverage must be in [0,1]");
    }
}

LoadedSample synthesize_sample(int size, double noise_sigma, double coverage, std::uint64_t seed) {
    Rng rng(seed);
    struct Blob {
        double x, y, sigma, weight;
    };
    std::vector<Blob> blobs;
    for (int b = 0; b < kBlobs; ++b) {
        blobs.push_back({rng.uniform(0.0, size), rng.uniform(0.0, size), rng.uniform(size / 8.0, size / 3.0),
                         rng.uniform(0.5, 1.5)});
    }

    const std::size_t n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
    std::vector<double> field(n);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double v = 0.0;
            for (const auto& b : blobs) {
                const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
                v += b.weight * std::exp(-d2 / (2.0 * b.sigma * b.sigma));
            }
            field[static_cast<std::size_t>(y) * size + x] = v;
        }
    }

    // The top `cloud` field values (ties broken by index) form the cloud region.
    const auto cloud = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return field[a] > field[b]; });

    LoadedSample sample{Image(size, size), Mask(size, size)};
    for (std::size_t j = 0; j < cloud; ++j) sample.mask.labels[order[j]] = 1;

    auto pixels = sample.image.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const Rgb base = sample.mask.labels[i] ? kSynthCloud : kSynthSky;
        auto noisy = [&](double c) { return std::clamp(c + noise_sigma * rng.normal(), 0.0, 1.0); };
        pixels[i].r = noisy(base.r);
        pixels[i].g = noisy(base.g);
        pixels[i].b = noisy(base.b);
    }
    return sample;
}

EntryMetadata synth_metadata(const SynthOptions& options, int index) {
    Rng rng(derive_seed(options.seed, kMetadataStream + static_cast<std::uint64_t>(index)));
    EntryMetadata md;
    md.cloud_coverage = target_coverage(options, index, rng);
    md.time_of_day = std::floor(rng.uniform(360.0, 1080.0));
    md.sun_distance = std::round(rng.uniform(0.0, 90.0) * 10.0) / 10.0;
    return md;
}

DatasetManifest make_synthetic_dataset(const SynthOptions& options, const fs::path& out_dir, bool force) {
    options.validate();
    fs::create_directories(out_dir);

    DatasetManifest manifest;
    manifest.name = "synthetic";
    manifest.root = out_dir;
    const int digits = std::max(3, static_cast<int>(std::to_string(options.images - 1).size()));
    for (int i = 0; i < options.images; ++i) {
        const std::string stem = fmt::format("img_{:0{}}", i, digits);
        const EntryMetadata md = synth_metadata(options, i);
        const auto sample = synthesize_sample(options.size, options.noise_sigma, *md.cloud_coverage,
                                              derive_seed(options.seed, static_cast<std::uint64_t>(i)));
        save_image(sample.image, out_dir / (stem + ".png"), force);
        save_mask(sample.mask, out_dir / (stem + "_GT.png"), force);
        manifest.entries.push_back({stem + ".png", stem + "_GT.png", md});
    }
    save_manifest(manifest, out_dir / "manifest.json", force);
    return manifest;
}

}  // namespace cloudseg
