#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "cloudseg/color_channels.hpp"
#include "cloudseg/dataset_io.hpp"
#include "cloudseg/moments.hpp"
#include "cloudseg/report.hpp"

namespace cloudseg {

/// Standardization statistics of one source image.
struct ColumnStats {
    Eigen::Index rows = 0;
    Eigen::VectorXd means;
    Eigen::VectorXd stds;
};

/// Column-standardized stack. Concatenations keep one ColumnStats per source image in row order;
/// a column is degenerate when it is all-zero (zero variance in every source).
struct StandardizedStack {
    Eigen::MatrixXd matrix;
    std::vector<ColumnStats> sources;
    std::vector<int> degenerate_columns;

    const Eigen::VectorXd& means() const { return sources.front().means; }
    const Eigen::VectorXd& stds() const { return sources.front().stds; }
    bool is_degenerate(int column) const;
    /// Only meaningful for 16-column channel stacks.
    std::vector<ChannelId> degenerate_channels() const;
};

/// (x - mean) / std per column with the sample (n-1) std. Zero-variance columns become zero and
/// are flagged. Throws ValidationError("insufficient pixels") below 2 rows.
StandardizedStack standardize(const Eigen::MatrixXd& stack);

/// Row-wise concatenation without re-standardization.
StandardizedStack concat_stacks(std::span<const StandardizedStack> stacks);

struct PcaReport {
    Eigen::VectorXd eigenvalues;         // descending, >= 0
    Eigen::VectorXd variance_fractions;  // sum to 1
    Eigen::VectorXd loading_factors;     // |first eigenvector|
    Eigen::MatrixXd eigenvectors;        // column s = s-th component
    Eigen::MatrixXd biplot;              // (channels x 2): component * sqrt(eigenvalue) on PC1, PC2
    int active_columns = 0;              // non-degenerate channels
};

/// PCA of the correlation matrix of a standardized stack. For a single standardized image this is
/// its covariance matrix. Each eigenvector is signed so its largest-magnitude component is positive.
PcaReport pca(const StandardizedStack& stack);

/// Same computation from pooled column moments; lets large datasets be streamed image by image.
PcaReport pca_from_moments(const Moments& moments);

/// Streams standardized stacks into pooled moments; finish() equals pca(concat_stacks(...)).
class CorrelationAccumulator {
public:
    void add(const StandardizedStack& stack);
    bool empty() const noexcept { return moments_.count == 0; }
    PcaReport finish() const { return pca_from_moments(moments_); }

private:
    Moments moments_;
};

enum class RocOrientation { direct, inverted };

const char* orientation_name(RocOrientation o);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocReport {
    ChannelId channel = ChannelId::red;
    std::vector<RocPoint> points;  // ordered by decreasing threshold, from (0,0) to (1,1)
    double auc = 0.0;
    double area_over_diagonal = 0.0;  // |auc - 0.5|
    RocOrientation orientation = RocOrientation::direct;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

/// Exact ROC over pooled samples: counts per distinct value, swept with "value >= t is cloud".
/// The trapezoidal area is accumulated in integers so it is exact for any sample count
/// with positives * negatives < 2^62.
class RocAccumulator {
public:
    void add(std::span<const double> values, std::span<const std::uint8_t> labels);
    RocReport finish(ChannelId channel = ChannelId::red) const;

    std::uint64_t positives() const noexcept { return positives_; }
    std::uint64_t negatives() const noexcept { return negatives_; }

private:
    struct Counts {
        std::uint64_t positive = 0;
        std::uint64_t negative = 0;
    };
    std::unordered_map<double, Counts> counts_;
    std::uint64_t positives_ = 0;
    std::uint64_t negatives_ = 0;
};

/// Throws NumericalError("degenerate ground truth") when labels hold a single class.
RocReport roc_area(std::span<const double> values, std::span<const std::uint8_t> labels,
                   ChannelId channel = ChannelId::red);

struct ChannelRank {
    ChannelId channel = ChannelId::red;
    double loading_factor = 0.0;
    double roc_area = 0.0;
    RocOrientation orientation = RocOrientation::direct;
};

struct RankReport {
    std::vector<ChannelRank> rows;  // sorted by roc_area, descending
    PcaReport pca;
    std::size_t images = 0;
};

/// Loading factors from the concatenated PCA and ROC areas from pooled raw channel values.
RankReport rank_channels(const DatasetManifest& manifest, std::optional<int> binarize_gt = std::nullopt);

struct PcaSummary {
    std::vector<std::string> image_names;
    std::vector<PcaReport> per_image;
    PcaReport concatenated;
};

PcaSummary analyze_pca(const DatasetManifest& manifest);

/// Pooled ROC of one channel over a manifest.
RocReport analyze_roc(const DatasetManifest& manifest, ChannelId channel, std::optional<int> binarize_gt = std::nullopt);

CsvReport pca_report_csv(const PcaSummary& summary, CsvReport::Config config);
CsvReport rank_report_csv(const RankReport& report, CsvReport::Config config);
CsvReport roc_report_csv(const RocReport& report, CsvReport::Config config);

}  // namespace cloudseg
