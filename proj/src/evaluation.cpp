#include "cloudseg/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include <spdlog/spdlog.h>

#include "cloudseg/kernels.hpp"
#include "cloudseg/rng.hpp"
#include "for_each_index.hpp"

namespace cloudseg {

namespace {

double ratio_or_convention(std::uint64_t num, std::uint64_t den, std::uint64_t other_side) {
    if (den == 0) return other_side == 0 ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

double rate_or_zero(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<std::string> image_names(const DatasetManifest& manifest) {
    std::vector<std::string> names;
    names.reserve(manifest.size());
    for (const auto& e : manifest.entries) names.push_back(e.image_path);
    return names;
}

std::vector<Eigen::Index> channel_columns(std::span<const ChannelId> channels) {
    std::vector<Eigen::Index> cols;
    cols.reserve(channels.size());
    for (ChannelId c : channels) cols.push_back(static_cast<Eigen::Index>(channel_index(c)));
    return cols;
}

FeatureMatrix select_features(const Eigen::MatrixXd& stack, std::span<const ChannelId> channels) {
    const auto cols = channel_columns(channels);
    FeatureMatrix f;
    f.values = stack(Eigen::all, cols);
    f.channel_ids.assign(channels.begin(), channels.end());
    return f;
}

Moments pool(std::span<const Moments> per_image, std::span<const std::size_t> members) {
    Moments out;
    for (std::size_t i : members) out.merge(per_image[i]);
    return out;
}

/// Pass one of every train/test experiment: per-image statistics of the full stack.
std::vector<Moments> collect_training_moments(const DatasetManifest& manifest, std::optional<int> binarize_gt) {
    manifest.require_masks();
    std::vector<Moments> out(manifest.size());
    detail::for_each_index(manifest.size(), [&](std::size_t i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        out[i] = full_training_moments(sample.image, sample.mask);
    });
    return out;
}

std::string channel_set_label(std::span<const ChannelId> channels) { return format_channel_list(channels); }

std::vector<std::string> metric_cells(const Metrics& m) {
    return {std::to_string(m.tp),        std::to_string(m.tn),     std::to_string(m.fp),
            std::to_string(m.fn),        format_number(m.precision), format_number(m.recall),
            format_number(m.f_score),    format_number(m.misclassification)};
}

const std::vector<std::string> kMetricHeader = {"tp", "tn", "fp", "fn", "precision", "recall", "f_score",
                                                "misclassification"};

std::vector<std::string> with_metrics(std::vector<std::string> lead, const Metrics& m) {
    auto cells = metric_cells(m);
    lead.insert(lead.end(), cells.begin(), cells.end());
    return lead;
}

std::vector<std::string> metric_header(std::vector<std::string> lead) {
    lead.insert(lead.end(), kMetricHeader.begin(), kMetricHeader.end());
    return lead;
}

}  // namespace

Metrics metrics_from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
    Metrics m{tp, tn, fp, fn};
    m.precision = ratio_or_convention(tp, tp + fp, tp + fn);
    m.recall = ratio_or_convention(tp, tp + fn, tp + fp);
    const double sum = m.precision + m.recall;
    m.f_score = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
    m.misclassification = rate_or_zero(fp + fn, m.total());
    return m;
}

Metrics score(const Mask& pred, const Mask& gt) {
    require_same_shape(pred.width, pred.height, gt.width, gt.height, "prediction vs ground truth");
    if (pred.labels.size() != gt.labels.size()) throw ValidationError("mask label counts differ");
    std::uint64_t counts[2][2] = {{0, 0}, {0, 0}};  // [pred][gt]
    for (std::size_t i = 0; i < pred.labels.size(); ++i) ++counts[pred.labels[i] != 0][gt.labels[i] != 0];
    return metrics_from_counts(counts[1][1], counts[0][0], counts[1][0], counts[0][1]);
}

Metrics mean_metrics(std::span<const Metrics> per_image) {
    if (per_image.empty()) throw ValidationError("no metrics to aggregate");
    Metrics out;
    for (const auto& m : per_image) {
        out.tp += m.tp;
        out.tn += m.tn;
        out.fp += m.fp;
        out.fn += m.fn;
        out.precision += m.precision;
        out.recall += m.recall;
        out.f_score += m.f_score;
        out.misclassification += m.misclassification;
    }
    const double n = static_cast<double>(per_image.size());
    out.precision /= n;
    out.recall /= n;
    out.f_score /= n;
    out.misclassification /= n;
    return out;
}

Metrics pooled_metrics(std::span<const Metrics> per_image) {
    if (per_image.empty()) throw ValidationError("no metrics to aggregate");
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (const auto& m : per_image) {
        tp += m.tp;
        tn += m.tn;
        fp += m.fp;
        fn += m.fn;
    }
    return metrics_from_counts(tp, tn, fp, fn);
}

Metrics aggregate_metrics(std::span<const Metrics> per_image, bool pooled) {
    return pooled ? pooled_metrics(per_image) : mean_metrics(per_image);
}

std::vector<std::size_t> CvPlan::fold_members(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(i);
    }
    return out;
}

CvPlan make_cv_plan(std::size_t n, int folds, std::uint64_t seed) {
    if (folds < 2) throw ValidationError("folds must be >= 2");
    if (static_cast<std::size_t>(folds) > n) {
        throw ValidationError("too few images: " + std::to_string(n) + " images for " + std::to_string(folds) + " folds");
    }
    CvPlan plan{folds, seed, std::vector<int>(n)};
    Rng rng(seed);
    const auto order = rng.permutation(n);
    for (std::size_t j = 0; j < n; ++j) plan.assignments[order[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
    return plan;
}

std::vector<std::vector<ChannelId>> CvOptions::every_channel() {
    std::vector<std::vector<ChannelId>> sets;
    for (ChannelId c : all_channels()) sets.push_back({c});
    return sets;
}

void CvOptions::validate() const {
    if (folds < 2) throw ValidationError("folds must be >= 2");
    if (channel_sets.empty()) throw ValidationError("no channel sets given");
    for (const auto& set : channel_sets) {
        if (set.empty()) throw ValidationError("empty channel set");
        if (components < 1 || components > static_cast<int>(set.size())) {
            throw ValidationError("number of components must be in [1, " + std::to_string(set.size()) + "]");
        }
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("threshold must be in [0,1]");
}

Moments full_training_moments(const Image& img, const Mask& mask) {
    require_same_shape(img.width(), img.height(), mask.width, mask.height, "image vs mask");
    const auto channels = all_channels();
    FeatureMatrix features{kernels::parallel::channel_stack(img),
                           std::vector<ChannelId>(channels.begin(), channels.end())};
    return joint_moments(features, label_values(mask));
}

Moments select_moments(const Moments& full, std::span<const ChannelId> channels) {
    if (full.columns() != kNumChannels + 1) throw ValidationError("expected full-stack training moments");
    auto cols = channel_columns(channels);
    cols.push_back(kNumChannels);
    Moments out;
    out.count = full.count;
    out.mean = full.mean(cols);
    out.comoment = full.comoment(cols, cols);
    return out;
}

CvResult cross_validate(const DatasetManifest& manifest, const CvOptions& options) {
    options.validate();
    const std::size_t n = manifest.size();
    const std::size_t sets = options.channel_sets.size();

    CvResult result;
    result.plan = make_cv_plan(n, options.folds, options.seed);
    result.channel_sets = options.channel_sets;
    result.image_names = image_names(manifest);

    const auto stats = collect_training_moments(manifest, options.binarize_gt);

    // models[s][f]: trained on every fold except f.
    std::vector<std::vector<PlsModel>> models(sets);
    for (int f = 0; f < options.folds; ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (result.plan.assignments[i] != f) train_idx.push_back(i);
        }
        const Moments pooled = pool(stats, train_idx);
        for (std::size_t s = 0; s < sets; ++s) {
            const auto& set = options.channel_sets[s];
            models[s].push_back(train_from_moments(select_moments(pooled, set), set, options.components));
        }
    }

    result.per_image.assign(sets, std::vector<Metrics>(n));
    detail::for_each_index(n, [&](std::size_t i) {
        const auto sample = load_sample(manifest, i, options.binarize_gt);
        const Eigen::MatrixXd stack = kernels::parallel::channel_stack(sample.image);
        const int fold = result.plan.assignments[i];
        for (std::size_t s = 0; s < sets; ++s) {
            const auto features = select_features(stack, options.channel_sets[s]);
            const auto prob = predict(models[s][static_cast<std::size_t>(fold)], features, sample.image.width(),
                                      sample.image.height());
            result.per_image[s][i] = score(binarize(prob, options.threshold), sample.mask);
        }
    });

    result.per_fold.assign(sets, {});
    result.overall.resize(sets);
    for (std::size_t s = 0; s < sets; ++s) {
        for (int f = 0; f < options.folds; ++f) {
            std::vector<Metrics> members;
            for (std::size_t i : result.plan.fold_members(f)) members.push_back(result.per_image[s][i]);
            result.per_fold[s].push_back(aggregate_metrics(members, options.pooled));
        }
        result.overall[s] = aggregate_metrics(result.per_image[s], options.pooled);
    }
    return result;
}

CsvReport cv_report_csv(const CvResult& result, CsvReport::Config config, bool per_image_rows) {
    CsvReport report(std::move(config));
    report.add_comment(std::string("zero denominators: ") + kZeroDenominatorNote);
    report.set_header(metric_header({"channels", "fold", "image"}));
    for (std::size_t s = 0; s < result.channel_sets.size(); ++s) {
        const std::string label = channel_set_label(result.channel_sets[s]);
        if (per_image_rows) {
            for (std::size_t i = 0; i < result.image_names.size(); ++i) {
                report.add_row(with_metrics(
                    {label, std::to_string(result.plan.assignments[i]), result.image_names[i]},
                    result.per_image[s][i]));
            }
        }
        for (std::size_t f = 0; f < result.per_fold[s].size(); ++f) {
            report.add_row(with_metrics({label, std::to_string(f), "all"}, result.per_fold[s][f]));
        }
        report.add_row(with_metrics({label, "mean", "all"}, result.overall[s]));
    }
    return report;
}

std::vector<double> default_sweep_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 20; ++i) t.push_back(i / 20.0);
    return t;
}

void SweepOptions::validate() const {
    if (channels.empty()) throw ValidationError("no channels given");
    if (components < 1 || components > static_cast<int>(channels.size())) {
        throw ValidationError("number of components must be in [1, " + std::to_string(channels.size()) + "]");
    }
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (thresholds.empty()) throw ValidationError("no thresholds given");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) throw ValidationError("threshold must be in [0,1]");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) throw ValidationError("thresholds must be strictly ascending");
    }
}

SweepReport roc_sweep(const DatasetManifest& manifest, const SweepOptions& options) {
    options.validate();
    const std::size_t n = manifest.size();
    const SplitSizes split = resolve_split(manifest);
    if (split.train < 1 || split.test < 1 || static_cast<std::size_t>(split.train + split.test) > n) {
        throw ValidationError("split " + std::to_string(split.train) + "/" + std::to_string(split.test) +
                              " does not fit " + std::to_string(n) + " images");
    }
    const auto trials = static_cast<std::size_t>(options.trials);
    const std::size_t nt = options.thresholds.size();

    // test_of[i]: trials in which image i is a test image.
    std::vector<std::vector<std::size_t>> test_of(n);
    std::vector<PlsModel> models;
    const auto stats = collect_training_moments(manifest, options.binarize_gt);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(options.seed, t));
        const auto order = rng.permutation(n);
        std::vector<std::size_t> train_idx(order.begin(), order.begin() + split.train);
        for (int j = 0; j < split.test; ++j) test_of[order[static_cast<std::size_t>(split.train + j)]].push_back(t);
        models.push_back(train_from_moments(select_moments(pool(stats, train_idx), options.channels), options.channels,
                                            options.components));
    }

    struct Counts {
        std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    };
    // counts[i][k * nt + h]: image i, k-th trial it tests in, threshold h.
    std::vector<std::vector<Counts>> counts(n);
    detail::for_each_index(n, [&](std::size_t i) {
        if (test_of[i].empty()) return;
        const auto sample = load_sample(manifest, i, options.binarize_gt);
        const auto features = make_features(sample.image, options.channels);
        counts[i].resize(test_of[i].size() * nt);
        for (std::size_t k = 0; k < test_of[i].size(); ++k) {
            const auto prob = predict(models[test_of[i][k]], features, sample.image.width(), sample.image.height());
            for (std::size_t h = 0; h < nt; ++h) {
                Counts& c = counts[i][k * nt + h];
                const double thr = options.thresholds[h];
                for (std::size_t p = 0; p < prob.values.size(); ++p) {
                    const bool pred = prob.values[p] >= thr;
                    const bool truth = sample.mask.labels[p] != 0;
                    if (pred) {
                        truth ? ++c.tp : ++c.fp;
                    } else {
                        truth ? ++c.fn : ++c.tn;
                    }
                }
            }
        }
    });

    std::vector<std::vector<Counts>> per_trial(trials, std::vector<Counts>(nt));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < test_of[i].size(); ++k) {
            for (std::size_t h = 0; h < nt; ++h) {
                Counts& dst = per_trial[test_of[i][k]][h];
                const Counts& src = counts[i][k * nt + h];
                dst.tp += src.tp;
                dst.fp += src.fp;
                dst.tn += src.tn;
                dst.fn += src.fn;
            }
        }
    }

    SweepReport report;
    report.trials = options.trials;
    report.split = split;
    report.per_trial.assign(trials, std::vector<RocPoint>(nt));
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t h = 0; h < nt; ++h) {
            const Counts& c = per_trial[t][h];
            report.per_trial[t][h] = {rate_or_zero(c.fp, c.fp + c.tn), rate_or_zero(c.tp, c.tp + c.fn)};
        }
    }
    const double count = static_cast<double>(trials);
    for (std::size_t h = 0; h < nt; ++h) {
        double fsum = 0.0, tsum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            fsum += report.per_trial[t][h].fpr;
            tsum += report.per_trial[t][h].tpr;
        }
        SweepPoint pt;
        pt.threshold = options.thresholds[h];
        pt.fpr_mean = fsum / count;
        pt.tpr_mean = tsum / count;
        if (trials > 1) {
            double fss = 0.0, tss = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                fss += std::pow(report.per_trial[t][h].fpr - pt.fpr_mean, 2);
                tss += std::pow(report.per_trial[t][h].tpr - pt.tpr_mean, 2);
            }
            pt.fpr_stderr = std::sqrt(fss / (count - 1.0)) / std::sqrt(count);
            pt.tpr_stderr = std::sqrt(tss / (count - 1.0)) / std::sqrt(count);
        }
        report.points.push_back(pt);
    }
    return report;
}

CsvReport sweep_report_csv(const SweepReport& report, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    csv.add_comment("trials=" + std::to_string(report.trials) + " train=" + std::to_string(report.split.train) +
                    " test=" + std::to_string(report.split.test));
    csv.set_header({"threshold", "fpr_mean", "fpr_stderr", "tpr_mean", "tpr_stderr"});
    for (const auto& p : report.points) {
        csv.add_row({format_number(p.threshold), format_number(p.fpr_mean), format_number(p.fpr_stderr),
                     format_number(p.tpr_mean), format_number(p.tpr_stderr)});
    }
    return csv;
}

EvaluationResult evaluate_model(const DatasetManifest& manifest, const PlsModel& model, double threshold, bool pooled,
                                std::optional<int> binarize_gt) {
    model.validate();
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("threshold must be in [0,1]");
    manifest.require_masks();
    EvaluationResult result;
    result.image_names = image_names(manifest);
    result.per_image.resize(manifest.size());
    detail::for_each_index(manifest.size(), [&](std::size_t i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        result.per_image[i] = score(binarize(predict_image(model, sample.image), threshold), sample.mask);
    });
    result.overall = aggregate_metrics(result.per_image, pooled);
    return result;
}

CsvReport evaluation_report_csv(const EvaluationResult& result, CsvReport::Config config, bool pooled) {
    CsvReport report(std::move(config));
    report.add_comment(std::string("zero denominators: ") + kZeroDenominatorNote);
    report.set_header(metric_header({"image"}));
    for (std::size_t i = 0; i < result.image_names.size(); ++i) {
        report.add_row(with_metrics({result.image_names[i]}, result.per_image[i]));
    }
    report.add_row(with_metrics({pooled ? "pooled" : "mean"}, result.overall));
    return report;
}

std::string grouping_name(Grouping g) {
    switch (g) {
        case Grouping::time_of_day: return "time_of_day";
        case Grouping::cloud_coverage: return "cloud_coverage";
        case Grouping::sun_distance: return "sun_distance";
    }
    return "unknown";
}

Grouping parse_grouping(const std::string& name) {
    for (Grouping g : {Grouping::time_of_day, Grouping::cloud_coverage, Grouping::sun_distance}) {
        if (grouping_name(g) == name) return g;
    }
    throw ValidationError("unknown grouping '" + name + "' (expected time_of_day, cloud_coverage or sun_distance)");
}

double default_bin_width(Grouping g) {
    switch (g) {
        case Grouping::time_of_day: return 60.0;
        case Grouping::cloud_coverage: return 0.1;
        case Grouping::sun_distance: return 10.0;
    }
    return 1.0;
}

BreakdownReport breakdown(const DatasetManifest& manifest, const PlsModel& model, Grouping grouping,
                          std::optional<double> bin_width, double threshold, std::optional<int> binarize_gt) {
    BreakdownReport report;
    report.grouping = grouping;
    report.bin_width = bin_width.value_or(default_bin_width(grouping));
    if (!(report.bin_width > 0.0) || !std::isfinite(report.bin_width)) throw ValidationError("bin width must be > 0");

    std::vector<std::size_t> tagged;
    std::vector<double> tags;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto& md = manifest.entries[i].metadata;
        const auto& field = grouping == Grouping::time_of_day      ? md.time_of_day
                            : grouping == Grouping::cloud_coverage ? md.cloud_coverage
                                                                   : md.sun_distance;
        if (!field) {
            spdlog::warn("breakdown: skipping '{}' (no {} metadata)", manifest.entries[i].image_path,
                         grouping_name(grouping));
            ++report.skipped;
            continue;
        }
        tagged.push_back(i);
        tags.push_back(*field);
    }
    if (tagged.empty()) throw ValidationError("no manifest entries carry " + grouping_name(grouping) + " metadata");

    std::vector<Metrics> metrics(tagged.size());
    std::vector<double> coverage(tagged.size());
    detail::for_each_index(tagged.size(), [&](std::size_t j) {
        const auto sample = load_sample(manifest, tagged[j], binarize_gt);
        metrics[j] = score(binarize(predict_image(model, sample.image), threshold), sample.mask);
        coverage[j] = sample.mask.coverage();
    });

    struct Acc {
        std::size_t n = 0;
        double f = 0.0, tag = 0.0, cov = 0.0;
    };
    std::map<long long, Acc> bins;
    for (std::size_t j = 0; j < tagged.size(); ++j) {
        Acc& a = bins[std::llround(tags[j] / report.bin_width)];
        ++a.n;
        a.f += metrics[j].f_score;
        a.tag += tags[j];
        a.cov += coverage[j];
    }
    for (const auto& [bin, a] : bins) {
        const double n = static_cast<double>(a.n);
        report.rows.push_back({static_cast<double>(bin) * report.bin_width, a.n, a.f / n, a.tag / n, a.cov / n});
    }
    return report;
}

CsvReport breakdown_report_csv(const BreakdownReport& report, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    if (report.skipped > 0) csv.add_comment("skipped " + std::to_string(report.skipped) + " entries without metadata");
    csv.set_header({"grouping", "bin_centre", "bin_low", "bin_high", "images", "mean_f_score", "mean_tagged",
                    "mean_mask_coverage"});
    const double half = report.bin_width / 2.0;
    for (const auto& r : report.rows) {
        csv.add_row({grouping_name(report.grouping), format_number(r.bin_centre), format_number(r.bin_centre - half),
                     format_number(r.bin_centre + half), std::to_string(r.images), format_number(r.mean_f_score),
                     format_number(r.mean_tagged), format_number(r.mean_mask_coverage)});
    }
    return csv;
}

std::vector<BenchmarkMethod> parse_benchmark_methods(const std::string& list, const BaselineSettings& settings) {
    std::vector<BenchmarkMethod> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const std::string token = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (token.empty()) throw ValidationError("empty method name in '" + list + "'");
        if (token == "pls") {
            out.push_back({"pls", std::nullopt});
        } else {
            const BaselineMethod m = parse_method(token);
            out.push_back({method_name(m), settings.for_method(m)});
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

BenchmarkReport run_benchmark(const DatasetManifest& manifest, std::span<const BenchmarkMethod> methods,
                              const PlsModel* model, double threshold, bool pooled, std::optional<int> binarize_gt) {
    if (methods.empty()) throw ValidationError("no benchmark methods given");
    for (const auto& m : methods) {
        if (!m.baseline && model == nullptr) throw ValidationError("method 'pls' requires --model");
        if (m.baseline) m.baseline->validate();
    }
    manifest.require_masks();

    BenchmarkReport report;
    report.image_names = image_names(manifest);
    for (const auto& m : methods) {
        BenchmarkRow row;
        row.method = m.name;
        report.rows.push_back(std::move(row));
    }

    using Clock = std::chrono::steady_clock;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        for (std::size_t k = 0; k < methods.size(); ++k) {
            const auto start = Clock::now();
            const Mask pred = methods[k].baseline ? run_baseline(sample.image, *methods[k].baseline)
                                                  : binarize(predict_image(*model, sample.image), threshold);
            const std::chrono::duration<double> elapsed = Clock::now() - start;
            report.rows[k].per_image.push_back(score(pred, sample.mask));
            report.rows[k].seconds.push_back(elapsed.count());
        }
    }
    for (auto& row : report.rows) {
        row.overall = aggregate_metrics(row.per_image, pooled);
        row.mean_seconds = std::accumulate(row.seconds.begin(), row.seconds.end(), 0.0) / row.seconds.size();
    }
    return report;
}

CsvReport benchmark_report_csv(const BenchmarkReport& report, CsvReport::Config config) {
    CsvReport csv(std::move(config));
    csv.add_comment(std::string("zero denominators: ") + kZeroDenominatorNote);
    csv.add_comment("runtime_s is wall time of segmentation only and varies between runs");
    auto header = metric_header({"method", "image"});
    header.push_back("runtime_s");
    csv.set_header(header);
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < report.image_names.size(); ++i) {
            auto cells = with_metrics({row.method, report.image_names[i]}, row.per_image[i]);
            cells.push_back(format_number(row.seconds[i]));
            csv.add_row(cells);
        }
    }
    for (const auto& row : report.rows) {
        auto cells = with_metrics({row.method, "all"}, row.overall);
        cells.push_back(format_number(row.mean_seconds));
        csv.add_row(cells);
    }
    return csv;
}

}  // namespace cloudseg
