#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloudseg/baselines.hpp"
#include "cloudseg/channel_analysis.hpp"
#include "cloudseg/color_channels.hpp"
#include "cloudseg/dataset_io.hpp"
#include "cloudseg/image.hpp"
#include "cloudseg/pls.hpp"
#include "cloudseg/report.hpp"

namespace cloudseg {

/// Confusion counts and derived rates of a binary cloud mask. Zero-denominator rule: a rate whose
/// denominator is zero is 1 when the other side of the comparison is empty too (nothing to find and
/// nothing claimed), else 0. The F-score of P = R = 0 is 0.
struct Metrics {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double misclassification = 0.0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
};

inline constexpr const char* kZeroDenominatorNote =
    "precision = 1 if tp+fp = 0 and tp+fn = 0, else 0 when tp+fp = 0; recall symmetric; f = 0 when P+R = 0";

Metrics metrics_from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn);

/// Throws ValidationError on a dimension mismatch.
Metrics score(const Mask& pred, const Mask& gt);

/// Counts summed; rates are unweighted means of the per-image rates.
Metrics mean_metrics(std::span<const Metrics> per_image);
/// Counts summed; rates recomputed from the summed counts.
Metrics pooled_metrics(std::span<const Metrics> per_image);
Metrics aggregate_metrics(std::span<const Metrics> per_image, bool pooled);

struct CvPlan {
    int folds = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignments;  // image index -> fold

    std::vector<std::size_t> fold_members(int fold) const;
};

/// Seeded permutation dealt round-robin into folds, so fold sizes differ by at most one.
/// Throws ValidationError unless 2 <= folds <= n.
CvPlan make_cv_plan(std::size_t n, int folds, std::uint64_t seed);

/// Defaults: c15, one component, threshold 0.5.
struct CvOptions {
    int folds = 5;
    std::vector<std::vector<ChannelId>> channel_sets = {{ChannelId::normalized_blue_red}};
    int components = 1;
    double threshold = 0.5;
    std::uint64_t seed = 42;
    bool pooled = false;
    std::optional<int> binarize_gt;

    /// One single-channel set per channel.
    static std::vector<std::vector<ChannelId>> every_channel();
    void validate() const;
};

struct CvResult {
    CvPlan plan;
    std::vector<std::vector<ChannelId>> channel_sets;
    std::vector<std::string> image_names;
    std::vector<std::vector<Metrics>> per_image;  // [set][image]
    std::vector<std::vector<Metrics>> per_fold;   // [set][fold]
    std::vector<Metrics> overall;                 // [set]
};

/// Trains on all folds but one and tests on the held-out fold, for every fold and channel set.
/// Each image is loaded twice (statistics, then prediction) whatever the number of channel sets.
CvResult cross_validate(const DatasetManifest& manifest, const CvOptions& options);

CsvReport cv_report_csv(const CvResult& result, CsvReport::Config config, bool per_image_rows = false);

/// Per-image training statistics of the full channel stack: columns are the 16 channels in
/// channel-number order followed by the label. Any channel subset's statistics are a sub-block.
Moments full_training_moments(const Image& img, const Mask& mask);

/// Restriction of full_training_moments output to `channels` plus the label column.
Moments select_moments(const Moments& full, std::span<const ChannelId> channels);

std::vector<double> default_sweep_thresholds();

struct SweepOptions {
    std::vector<ChannelId> channels = {ChannelId::normalized_blue_red};
    int components = 1;
    int trials = 20;
    std::vector<double> thresholds = default_sweep_thresholds();
    std::uint64_t seed = 42;
    std::optional<int> binarize_gt;

    void validate() const;
};

struct SweepPoint {
    double threshold = 0.0;
    double fpr_mean = 0.0;
    double fpr_stderr = 0.0;
    double tpr_mean = 0.0;
    double tpr_stderr = 0.0;
};

struct SweepReport {
    int trials = 0;
    SplitSizes split;
    std::vector<SweepPoint> points;                 // ascending threshold
    std::vector<std::vector<RocPoint>> per_trial;   // [trial][threshold], pooled over the test images
};

/// Random train/test splits (sizes from resolve_split); one model per trial; pooled (FPR, TPR)
/// over each trial's test images at every threshold; mean and standard error across trials.
/// A rate with an empty denominator is 0.
SweepReport roc_sweep(const DatasetManifest& manifest, const SweepOptions& options);

CsvReport sweep_report_csv(const SweepReport& report, CsvReport::Config config);

struct EvaluationResult {
    std::vector<std::string> image_names;
    std::vector<Metrics> per_image;
    Metrics overall;
};

EvaluationResult evaluate_model(const DatasetManifest& manifest, const PlsModel& model, double threshold = 0.5,
                                bool pooled = false, std::optional<int> binarize_gt = std::nullopt);

CsvReport evaluation_report_csv(const EvaluationResult& result, CsvReport::Config config, bool pooled);

enum class Grouping { time_of_day, cloud_coverage, sun_distance };

std::string grouping_name(Grouping g);
Grouping parse_grouping(const std::string& name);
/// Bin widths: 60 minutes, 0.1 coverage, 10 degrees.
double default_bin_width(Grouping g);

struct BreakdownRow {
    double bin_centre = 0.0;
    std::size_t images = 0;
    double mean_f_score = 0.0;
    double mean_tagged = 0.0;       // mean metadata value in the bin
    double mean_mask_coverage = 0.0;  // recounted from the ground-truth masks
};

struct BreakdownReport {
    Grouping grouping = Grouping::cloud_coverage;
    double bin_width = 0.0;
    std::size_t skipped = 0;
    std::vector<BreakdownRow> rows;  // ascending bin
};

/// Bins centred on multiples of `bin_width` (index round(value / width)). Entries lacking the
/// metadata field are skipped with a warning; throws ValidationError if none carries it.
BreakdownReport breakdown(const DatasetManifest& manifest, const PlsModel& model, Grouping grouping,
                          std::optional<double> bin_width = std::nullopt, double threshold = 0.5,
                          std::optional<int> binarize_gt = std::nullopt);

CsvReport breakdown_report_csv(const BreakdownReport& report, CsvReport::Config config);

/// A benchmarked method: one of the baselines or "pls" (requires a model).
struct BenchmarkMethod {
    std::string name;
    std::optional<BaselineConfig> baseline;
};

std::vector<BenchmarkMethod> parse_benchmark_methods(const std::string& list, const BaselineSettings& settings);

struct BenchmarkRow {
    std::string method;
    std::vector<Metrics> per_image;
    std::vector<double> seconds;  // segmentation wall time per image, excluding I/O
    Metrics overall;
    double mean_seconds = 0.0;
};

struct BenchmarkReport {
    std::vector<std::string> image_names;
    std::vector<BenchmarkRow> rows;
};

/// Images are processed sequentially so per-image timings are not perturbed by each other.
BenchmarkReport run_benchmark(const DatasetManifest& manifest, std::span<const BenchmarkMethod> methods,
                              const PlsModel* model, double threshold = 0.5, bool pooled = false,
                              std::optional<int> binarize_gt = std::nullopt);

CsvReport benchmark_report_csv(const BenchmarkReport& report, CsvReport::Config config);

}  // namespace cloudseg
