#include "cloudseg/channel_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "cloudseg/image_io.hpp"
#include "cloudseg/kernels.hpp"

namespace cloudseg {

namespace {

// Relative std below which a column counts as constant.
constexpr double kDegenerateStd = 1e-12;

void require_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw ValidationError("invalid stack: non-finite values");
}

}  // namespace

bool StandardizedStack::is_degenerate(int column) const {
    return std::find(degenerate_columns.begin(), degenerate_columns.end(), column) != degenerate_columns.end();
}

std::vector<ChannelId> StandardizedStack::degenerate_channels() const {
    std::vector<ChannelId> out;
    for (int c : degenerate_columns) out.push_back(channel_from_number(c + 1));
    return out;
}

StandardizedStack standardize(const Eigen::MatrixXd& stack) {
    if (stack.rows() < 2) throw ValidationError("insufficient pixels");
    require_finite(stack);

    const Eigen::Index n = stack.rows();
    StandardizedStack out;
    out.matrix.resize(n, stack.cols());
    ColumnStats stats;
    stats.rows = n;
    stats.means = stack.colwise().mean().transpose();
    stats.stds.resize(stack.cols());

    for (Eigen::Index j = 0; j < stack.cols(); ++j) {
        auto centred = stack.col(j).array() - stats.means[j];
        const double sd = std::sqrt(centred.square().sum() / static_cast<double>(n - 1));
        stats.stds[j] = sd;
        if (sd <= kDegenerateStd * std::max(1.0, std::abs(stats.means[j]))) {
            out.matrix.col(j).setZero();
            out.degenerate_columns.push_back(static_cast<int>(j));
        } else {
            out.matrix.col(j) = centred / sd;
        }
    }
    out.sources.push_back(std::move(stats));
    return out;
}

StandardizedStack concat_stacks(std::span<const StandardizedStack> stacks) {
    if (stacks.empty()) throw ValidationError("concat_stacks: empty list");
    const Eigen::Index cols = stacks.front().matrix.cols();
    Eigen::Index rows = 0;
    for (const auto& s : stacks) {
        if (s.matrix.cols() != cols) throw ValidationError("concat_stacks: column count mismatch");
        rows += s.matrix.rows();
    }

    StandardizedStack out;
    out.matrix.resize(rows, cols);
    Eigen::Index offset = 0;
    for (const auto& s : stacks) {
        out.matrix.middleRows(offset, s.matrix.rows()) = s.matrix;
        offset += s.matrix.rows();
        out.sources.insert(out.sources.end(), s.sources.begin(), s.sources.end());
    }
    for (int c = 0; c < static_cast<int>(cols); ++c) {
        const bool everywhere = std::all_of(stacks.begin(), stacks.end(),
                                            [c](const StandardizedStack& s) { return s.is_degenerate(c); });
        if (everywhere) out.degenerate_columns.push_back(c);
    }
    return out;
}

PcaReport pca_from_moments(const Moments& moments) {
    if (moments.count < 2) throw ValidationError("insufficient pixels");
    if (!moments.comoment.allFinite()) throw ValidationError("invalid stack: non-finite values");

    const Eigen::Index d = moments.columns();
    const Eigen::VectorXd diag = moments.comoment.diagonal();
    std::vector<bool> active(static_cast<std::size_t>(d));
    int active_count = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        active[static_cast<std::size_t>(j)] = diag[j] > 0.0;
        active_count += active[static_cast<std::size_t>(j)] ? 1 : 0;
    }
    if (active_count == 0) throw NumericalError("invalid stack: every channel is degenerate");

    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        corr(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < d; ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            const double r = moments.comoment(i, j) / std::sqrt(diag[i] * diag[j]);
            corr(i, j) = r;
            corr(j, i) = r;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

    PcaReport report;
    report.active_columns = active_count;
    report.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
    report.eigenvectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index s = 0; s < d; ++s) {
        Eigen::Index arg = 0;
        report.eigenvectors.col(s).cwiseAbs().maxCoeff(&arg);
        if (report.eigenvectors(arg, s) < 0.0) report.eigenvectors.col(s) *= -1.0;
    }
    report.variance_fractions = report.eigenvalues / report.eigenvalues.sum();
    report.loading_factors = report.eigenvectors.col(0).cwiseAbs();
    report.biplot.resize(d, 2);
    for (int s = 0; s < 2; ++s) {
        const double scale = s < d ? std::sqrt(report.eigenvalues[s]) : 0.0;
        report.biplot.col(s) = s < d ? Eigen::VectorXd(report.eigenvectors.col(s) * scale) : Eigen::VectorXd::Zero(d);
    }
    return report;
}

PcaReport pca(const StandardizedStack& stack) {
    require_finite(stack.matrix);
    return pca_from_moments(kernels::parallel::column_moments(stack.matrix));
}

void CorrelationAccumulator::add(const StandardizedStack& stack) {
    require_finite(stack.matrix);
    moments_.merge(kernels::parallel::column_moments(stack.matrix));
}

const char* orientation_name(RocOrientation o) { return o == RocOrientation::direct ? "direct" : "inverted"; }

void RocAccumulator::add(std::span<const double> values, std::span<const std::uint8_t> labels) {
    if (values.size() != labels.size()) throw ValidationError("roc: values and labels differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) throw ValidationError("roc: non-finite value at index " + std::to_string(i));
        auto& c = counts_[v == 0.0 ? 0.0 : v];
        if (labels[i]) {
            ++c.positive;
            ++positives_;
        } else {
            ++c.negative;
            ++negatives_;
        }
    }
}

RocReport RocAccumulator::finish(ChannelId channel) const {
    if (positives_ == 0 || negatives_ == 0) throw NumericalError("degenerate ground truth");
    if (positives_ > (std::uint64_t{1} << 62) / negatives_) throw NumericalError("too many samples for exact ROC");

    std::vector<std::pair<double, Counts>> sorted(counts_.begin(), counts_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    RocReport report;
    report.channel = channel;
    report.positives = positives_;
    report.negatives = negatives_;
    report.points.reserve(sorted.size() + 1);
    report.points.push_back({0.0, 0.0});

    const double p = static_cast<double>(positives_);
    const double n = static_cast<double>(negatives_);
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t twice_area = 0;  // 2 * area * P * N
    for (const auto& [value, c] : sorted) {
        const std::uint64_t tp_next = tp + c.positive;
        const std::uint64_t fp_next = fp + c.negative;
        twice_area += (fp_next - fp) * (tp + tp_next);
        tp = tp_next;
        fp = fp_next;
        report.points.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p});
    }

    report.auc = static_cast<double>(twice_area) / (2.0 * p * n);
    report.area_over_diagonal = std::abs(report.auc - 0.5);
    report.orientation = report.auc < 0.5 ? RocOrientation::inverted : RocOrientation::direct;
    return report;
}

RocReport roc_area(std::span<const double> values, std::span<const std::uint8_t> labels, ChannelId channel) {
    RocAccumulator acc;
    acc.add(values, labels);
    return acc.finish(channel);
}

RankReport rank_channels(const DatasetManifest& manifest, std::optional<int> binarize_gt) {
    manifest.require_masks();
    CorrelationAccumulator correlation;
    std::vector<RocAccumulator> rocs(kNumChannels);

    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        const Eigen::MatrixXd stack = extract_stack(sample.image);
        correlation.add(standardize(stack));
        for (int j = 0; j < kNumChannels; ++j) {
            const Eigen::VectorXd column = stack.col(j);
            rocs[static_cast<std::size_t>(j)].add(std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
                                                  sample.mask.labels);
        }
    }

    RankReport report;
    report.images = manifest.size();
    report.pca = correlation.finish();
    for (int j = 0; j < kNumChannels; ++j) {
        const ChannelId id = channel_from_number(j + 1);
        const RocReport roc = rocs[static_cast<std::size_t>(j)].finish(id);
        report.rows.push_back({id, report.pca.loading_factors[j], roc.area_over_diagonal, roc.orientation});
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ChannelRank& a, const ChannelRank& b) { return a.roc_area > b.roc_area; });
    return report;
}

PcaSummary analyze_pca(const DatasetManifest& manifest) {
    PcaSummary summary;
    CorrelationAccumulator correlation;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const Image img = load_image(manifest.image_file(i));
        const StandardizedStack stack = standardize(extract_stack(img));
        summary.image_names.push_back(manifest.entries[i].image_path);
        summary.per_image.push_back(pca(stack));
        correlation.add(stack);
    }
    summary.concatenated = correlation.finish();
    return summary;
}

RocReport analyze_roc(const DatasetManifest& manifest, ChannelId channel, std::optional<int> binarize_gt) {
    manifest.require_masks();
    RocAccumulator acc;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        const auto values = extract_channel(sample.image, channel).values;
        acc.add(values, sample.mask.labels);
    }
    return acc.finish(channel);
}

CsvReport pca_report_csv(const PcaSummary& summary, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    std::vector<std::string> header = {"image"};
    for (int s = 1; s <= kNumChannels; ++s) header.push_back("pc" + std::to_string(s));
    csv.set_header(header);
    auto add = [&csv](const std::string& name, const PcaReport& r) {
        std::vector<std::string> row = {name};
        for (Eigen::Index s = 0; s < r.variance_fractions.size(); ++s) row.push_back(format_number(r.variance_fractions[s]));
        csv.add_row(std::move(row));
    };
    for (std::size_t i = 0; i < summary.per_image.size(); ++i) add(summary.image_names[i], summary.per_image[i]);
    add("concatenated", summary.concatenated);

    csv.add_comment("concatenated loading factors and biplot coordinates:");
    for (int j = 0; j < kNumChannels && j < summary.concatenated.loading_factors.size(); ++j) {
        const ChannelId id = channel_from_number(j + 1);
        csv.add_comment(channel_tag(id) + " loading=" + format_number(summary.concatenated.loading_factors[j]) +
                        " biplot_pc1=" + format_number(summary.concatenated.biplot(j, 0)) +
                        " biplot_pc2=" + format_number(summary.concatenated.biplot(j, 1)));
    }
    return csv;
}

CsvReport rank_report_csv(const RankReport& report, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    csv.set_header({"rank", "channel", "name", "loading_factor", "roc_area", "orientation"});
    int rank = 1;
    for (const auto& r : report.rows) {
        csv.add_row({std::to_string(rank++), channel_tag(r.channel), std::string(channel_name(r.channel)),
                     format_number(r.loading_factor), format_number(r.roc_area), orientation_name(r.orientation)});
    }
    return csv;
}

CsvReport roc_report_csv(const RocReport& report, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    csv.add_comment("channel=" + channel_tag(report.channel) + " auc=" + format_number(report.auc) +
                    " area_over_diagonal=" + format_number(report.area_over_diagonal) +
                    " orientation=" + orientation_name(report.orientation));
    csv.set_header({"fpr", "tpr"});
    for (const auto& p : report.points) csv.add_row({format_number(p.fpr), format_number(p.tpr)});
    return csv;
}

}  // namespace cloudseg
