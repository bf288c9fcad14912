// Command-line front end. Exit codes: 0 success, 1 validation, 2 I/O, 3 numerical failure.

#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cloudseg/baselines.hpp"
#include "cloudseg/channel_analysis.hpp"
#include "cloudseg/color_channels.hpp"
#include "cloudseg/dataset_io.hpp"
#include "cloudseg/error.hpp"
#include "cloudseg/evaluation.hpp"
#include "cloudseg/fisheye.hpp"
#include "cloudseg/image_io.hpp"
#include "cloudseg/kernels.hpp"
#include "cloudseg/persistence.hpp"
#include "cloudseg/pls.hpp"
#include "cloudseg/report.hpp"
#include "cloudseg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace cloudseg;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 42;
    int jobs = 0;
    std::string log_level = "info";
    bool force = false;
    bool stamp = false;
    std::optional<int> binarize_gt;
    std::string fov_convention = "diagonal";
    bool pooled = false;
    std::string baseline_config;
};

GlobalOptions g;
std::string g_command;

CsvReport::Config config_for(CsvReport::Config extra) {
    CsvReport::Config cfg{{"command", g_command}, {"seed", std::to_string(g.seed)}};
    if (g.binarize_gt) cfg.emplace_back("binarize_gt", std::to_string(*g.binarize_gt));
    cfg.insert(cfg.end(), extra.begin(), extra.end());
    if (g.stamp) {
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        cfg.emplace_back("stamp", buf);
    }
    return cfg;
}

/// Report to a file, or to standard output when no path was given.
void emit(const CsvReport& report, const std::string& path) {
    if (path.empty()) {
        std::cout << report.str();
    } else {
        report.write(path, g.force);
        spdlog::info("wrote {}", path);
    }
}

std::string num(double v) { return format_number(v); }

DatasetManifest require_manifest(const std::string& path) {
    if (path.empty()) throw ValidationError("--manifest is required");
    return load_manifest(path);
}

BaselineSettings baseline_settings() {
    if (g.baseline_config.empty()) return {};
    return BaselineSettings::from_json(read_json_file(g.baseline_config));
}

FovConvention fov_convention() {
    if (g.fov_convention == "diagonal") return FovConvention::diagonal;
    if (g.fov_convention == "horizontal") return FovConvention::horizontal;
    throw ValidationError("--fov-convention must be diagonal or horizontal");
}

// ---------------------------------------------------------------------------------------------
// channels extract

struct ChannelsOpts {
    std::string input, channel = "c15", output, manifest, out_dir;
};

void run_channels_extract(const ChannelsOpts& o) {
    const ChannelId ch = parse_channel(o.channel);
    if (!o.manifest.empty()) {
        if (o.out_dir.empty()) throw ValidationError("--out-dir is required with --manifest");
        const auto manifest = load_manifest(o.manifest);
        fs::create_directories(o.out_dir);
        for (std::size_t i = 0; i < manifest.size(); ++i) {
            const auto img = load_image(manifest.image_file(i));
            const fs::path out = fs::path(o.out_dir) / (manifest.image_file(i).stem().string() + "_" + channel_tag(ch) + ".png");
            save_channel_map(extract_channel(img, ch), out, g.force);
        }
        return;
    }
    if (o.input.empty() || o.output.empty()) throw ValidationError("--input and --output are required");
    save_channel_map(extract_channel(load_image(o.input), ch), o.output, g.force);
}

// ---------------------------------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
    std::string manifest, report, channel = "c15";
};

void run_analyze_pca(const AnalyzeOpts& o) {
    const auto summary = analyze_pca(require_manifest(o.manifest));
    emit(pca_report_csv(summary, config_for({{"manifest", o.manifest}})), o.report);
}

void run_analyze_rank(const AnalyzeOpts& o) {
    const auto report = rank_channels(require_manifest(o.manifest), g.binarize_gt);
    emit(rank_report_csv(report, config_for({{"manifest", o.manifest}})), o.report);
}

void run_analyze_roc(const AnalyzeOpts& o) {
    const ChannelId ch = parse_channel(o.channel);
    const auto report = analyze_roc(require_manifest(o.manifest), ch, g.binarize_gt);
    emit(roc_report_csv(report, config_for({{"manifest", o.manifest}, {"channel", channel_tag(ch)}})), o.report);
}

// ---------------------------------------------------------------------------------------------
// train / predict / binarize

struct TrainOpts {
    std::string manifest, channels = "c15", model;
    int components = 1;
};

void run_train(const TrainOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    if (o.model.empty()) throw ValidationError("--model is required");
    ensure_writable(o.model, g.force);
    const auto channels = parse_channel_list(o.channels);
    auto model = train_from_manifest(manifest, channels, o.components, g.binarize_gt);
    save_model(model, o.model, g.force);
    spdlog::info("trained on {} images; coefficients written to {}", manifest.size(), o.model);
}

struct PredictOpts {
    std::string model, input, prob, mask, manifest, out_dir;
    double threshold = 0.5;
};

void predict_one(const PlsModel& model, const fs::path& input, const fs::path& prob_path, const fs::path& mask_path,
                 double threshold) {
    const auto prob = predict_image(model, load_image(input));
    if (prob.degenerate) spdlog::warn("{}: constant prediction, belongingness set to 0.5", input.string());
    if (!prob_path.empty()) save_probability_map(prob, prob_path, g.force);
    if (!mask_path.empty()) save_mask(binarize(prob, threshold), mask_path, g.force);
}

void run_predict(const PredictOpts& o) {
    if (o.model.empty()) throw ValidationError("--model is required");
    if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) throw ValidationError("threshold must be in [0,1]");
    const auto model = load_model(o.model);
    if (!o.manifest.empty()) {
        if (o.out_dir.empty()) throw ValidationError("--out-dir is required with --manifest");
        const auto manifest = load_manifest(o.manifest);
        fs::create_directories(o.out_dir);
        for (std::size_t i = 0; i < manifest.size(); ++i) {
            const std::string stem = manifest.image_file(i).stem().string();
            predict_one(model, manifest.image_file(i), fs::path(o.out_dir) / (stem + "_prob.png"),
                        fs::path(o.out_dir) / (stem + "_mask.png"), o.threshold);
        }
        return;
    }
    if (o.input.empty()) throw ValidationError("--input is required");
    if (o.prob.empty() && o.mask.empty()) throw ValidationError("at least one of --prob and --mask is required");
    predict_one(model, o.input, o.prob, o.mask, o.threshold);
}

struct BinarizeOpts {
    std::string prob, mask;
    double threshold = 0.5;
};

void run_binarize(const BinarizeOpts& o) {
    if (o.prob.empty() || o.mask.empty()) throw ValidationError("--prob and --mask are required");
    save_mask(binarize(load_probability_map(o.prob), o.threshold), o.mask, g.force);
}

// ---------------------------------------------------------------------------------------------
// evaluation

struct EvalOpts {
    std::string manifest, model, report;
    double threshold = 0.5;
};

void run_evaluate(const EvalOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    if (o.model.empty()) throw ValidationError("--model is required");
    const auto model = load_model(o.model);
    const auto result = evaluate_model(manifest, model, o.threshold, g.pooled, g.binarize_gt);
    emit(evaluation_report_csv(result,
                               config_for({{"manifest", o.manifest},
                                           {"model", o.model},
                                           {"threshold", num(o.threshold)},
                                           {"aggregate", g.pooled ? "pooled" : "mean"}}),
                               g.pooled),
         o.report);
}

struct CrossvalOpts {
    std::string manifest, channels = "c15", report;
    int folds = 5;
    int components = 1;
    double threshold = 0.5;
    bool each_channel = false;
    bool per_image = false;
};

void run_crossval(const CrossvalOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    CvOptions cv;
    cv.folds = o.folds;
    cv.channel_sets = o.each_channel ? CvOptions::every_channel()
                                     : std::vector<std::vector<ChannelId>>{parse_channel_list(o.channels)};
    cv.components = o.components;
    cv.threshold = o.threshold;
    cv.seed = g.seed;
    cv.pooled = g.pooled;
    cv.binarize_gt = g.binarize_gt;
    const auto result = cross_validate(manifest, cv);
    emit(cv_report_csv(result,
                       config_for({{"manifest", o.manifest},
                                   {"folds", std::to_string(o.folds)},
                                   {"channels", o.each_channel ? "each" : format_channel_list(cv.channel_sets[0])},
                                   {"components", std::to_string(o.components)},
                                   {"threshold", num(o.threshold)},
                                   {"aggregate", g.pooled ? "pooled" : "mean"}}),
                       o.per_image),
         o.report);
}

struct SweepOpts {
    std::string manifest, channels = "c15", report;
    int components = 1;
    int trials = 20;
    double step = 0.05;
};

void run_rocsweep(const SweepOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    SweepOptions sw;
    sw.channels = parse_channel_list(o.channels);
    sw.components = o.components;
    sw.trials = o.trials;
    sw.seed = g.seed;
    sw.binarize_gt = g.binarize_gt;
    if (!(o.step > 0.0 && o.step <= 1.0)) throw ValidationError("--step must be in (0, 1]");
    const int steps = static_cast<int>(std::llround(1.0 / o.step));
    if (std::abs(steps * o.step - 1.0) > 1e-9) throw ValidationError("--step must divide 1");
    sw.thresholds.clear();
    for (int i = 0; i <= steps; ++i) sw.thresholds.push_back(static_cast<double>(i) / steps);
    const auto report = roc_sweep(manifest, sw);
    emit(sweep_report_csv(report, config_for({{"manifest", o.manifest},
                                              {"channels", format_channel_list(sw.channels)},
                                              {"components", std::to_string(o.components)},
                                              {"trials", std::to_string(o.trials)},
                                              {"step", num(o.step)}})),
         o.report);
}

struct BenchOpts {
    std::string manifest, methods = "long,souza,li,pls", model, report;
    double threshold = 0.5;
    std::optional<double> long_threshold, souza_threshold, li_threshold, li_std_cutoff;
};

void run_benchmark_cmd(const BenchOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    BaselineSettings settings = baseline_settings();
    if (o.long_threshold) settings.long_ratio.fixed_threshold = *o.long_threshold;
    if (o.souza_threshold) settings.souza.fixed_threshold = *o.souza_threshold;
    if (o.li_threshold) settings.li.fixed_threshold = *o.li_threshold;
    if (o.li_std_cutoff) settings.li.hybrid_std_cutoff = *o.li_std_cutoff;
    const auto methods = parse_benchmark_methods(o.methods, settings);
    std::optional<PlsModel> model;
    if (!o.model.empty()) model = load_model(o.model);
    const auto report = run_benchmark(manifest, methods, model ? &*model : nullptr, o.threshold, g.pooled,
                                      g.binarize_gt);
    emit(benchmark_report_csv(report, config_for({{"manifest", o.manifest},
                                                  {"methods", o.methods},
                                                  {"model", o.model},
                                                  {"threshold", num(o.threshold)},
                                                  {"long_threshold", num(settings.long_ratio.fixed_threshold)},
                                                  {"souza_threshold", num(settings.souza.fixed_threshold)},
                                                  {"li_fixed_threshold", num(settings.li.fixed_threshold)},
                                                  {"li_std_cutoff", num(settings.li.hybrid_std_cutoff)},
                                                  {"aggregate", g.pooled ? "pooled" : "mean"}})),
         o.report);
}

struct BreakdownOpts {
    std::string manifest, model, by = "cloud_coverage", report;
    std::optional<double> bin_width;
    double threshold = 0.5;
};

void run_breakdown(const BreakdownOpts& o) {
    const auto manifest = require_manifest(o.manifest);
    if (o.model.empty()) throw ValidationError("--model is required");
    const Grouping grouping = parse_grouping(o.by);
    const auto report = breakdown(manifest, load_model(o.model), grouping, o.bin_width, o.threshold, g.binarize_gt);
    emit(breakdown_report_csv(report, config_for({{"manifest", o.manifest},
                                                  {"model", o.model},
                                                  {"by", o.by},
                                                  {"bin_width", num(report.bin_width)},
                                                  {"threshold", num(o.threshold)}})),
         o.report);
}

struct SynthOpts {
    std::string out;
    int images = 20;
    int size = 128;
    double noise = 0.05;
    std::vector<double> coverages;
};

void run_synth(const SynthOpts& o) {
    if (o.out.empty()) throw ValidationError("--out is required");
    SynthOptions so;
    so.images = o.images;
    so.size = o.size;
    so.noise_sigma = o.noise;
    so.seed = g.seed;
    so.coverages = o.coverages;
    const auto manifest = make_synthetic_dataset(so, o.out, g.force);
    spdlog::info("wrote {} images and manifest.json to {}", manifest.size(), o.out);
}

// ---------------------------------------------------------------------------------------------
// undistort / convert-manifest

struct UndistortOpts {
    std::string input, output, center;
    std::optional<double> focal;
    double max_theta_deg = 90.0;
    double azimuth = 0.0;
    double elevation = 90.0;
    double fov = 62.0;
    int size = 600;
};

void run_undistort(const UndistortOpts& o) {
    if (o.input.empty() || o.output.empty()) throw ValidationError("--input and --output are required");
    const Image src = load_image(o.input);
    FisheyeCalibration cal;
    cal.max_theta = o.max_theta_deg * std::numbers::pi / 180.0;
    if (o.center.empty()) {
        cal.cx = (src.width() - 1) / 2.0;
        cal.cy = (src.height() - 1) / 2.0;
    } else {
        const auto comma = o.center.find(',');
        if (comma == std::string::npos) throw ValidationError("--center must be cx,cy");
        try {
            cal.cx = std::stod(o.center.substr(0, comma));
            cal.cy = std::stod(o.center.substr(comma + 1));
        } catch (const std::exception&) {
            throw ValidationError("--center must be cx,cy");
        }
    }
    // Without an explicit focal the fisheye circle is the largest one centred on (cx, cy).
    const double radius = std::min({cal.cx, cal.cy, src.width() - 1 - cal.cx, src.height() - 1 - cal.cy});
    cal.focal = o.focal.value_or(radius / cal.max_theta);
    const ViewSpec view{o.azimuth, o.elevation, o.fov, o.size, fov_convention()};
    save_image(undistort(src, cal, view), o.output, g.force);
}

struct ConvertOpts {
    std::string dir, name, gt_suffix = "_GT", manifest;
};

void run_convert(const ConvertOpts& o) {
    if (o.dir.empty() || o.manifest.empty()) throw ValidationError("--dir and --manifest are required");
    const std::string name = o.name.empty() ? fs::path(o.dir).filename().string() : o.name;
    const auto manifest = manifest_from_directory(o.dir, name, o.gt_suffix);
    save_manifest(manifest, o.manifest, g.force);
    spdlog::info("{} entries written to {}", manifest.size(), o.manifest);
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("cloudseg");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%^%l%$: %v");
    const auto level = spdlog::level::from_str(g.log_level);
    if (level == spdlog::level::off && g.log_level != "off") {
        throw ValidationError("unknown log level '" + g.log_level + "'");
    }
    spdlog::set_level(level);
}

int fail(ErrorKind kind, const std::string& message) {
    std::cerr << "error: " << kind_name(kind) << ": " << message << '\n';
    return static_cast<int>(kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colour-based sky/cloud segmentation: channel analysis, PLS segmentation, baselines, "
                 "evaluation and fisheye undistortion."};
    app.name("cloudseg");
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();

    app.add_option("--seed", g.seed, "Seed for every randomized step");
    app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores); results do not depend on it")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error, critical or off");
    app.add_flag("--force", g.force, "Overwrite existing output files");
    app.add_flag("--stamp", g.stamp, "Record the wall-clock time in report headers");
    app.add_option("--binarize-gt", g.binarize_gt, "Accept gray masks: values >= N are cloud")
        ->check(CLI::Range(1, 255));
    app.add_option("--fov-convention", g.fov_convention, "Field of view spans the output diagonal or width")
        ->check(CLI::IsMember({"diagonal", "horizontal"}));
    app.add_flag("--pooled", g.pooled, "Pool pixel counts over images instead of averaging per-image scores");
    app.add_option("--baseline-config", g.baseline_config, "JSON file with baseline thresholds");

    std::function<void()> action;
    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto* s = parent->add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto bind = [&](CLI::App* s, const std::string& full, std::function<void()> fn) {
        s->callback([&action, full, fn] {
            g_command = full;
            action = fn;
        });
    };

    // channels
    ChannelsOpts ch;
    auto* channels = sub(&app, "channels", "Colour channel maps");
    channels->require_subcommand(1);
    auto* extract = sub(channels, "extract", "Write one channel map as a 16-bit PNG plus sidecar");
    extract->add_option("--input", ch.input, "Input image");
    extract->add_option("--channel", ch.channel, "Channel (c1..c16 or name)");
    extract->add_option("--output", ch.output, "Output PNG");
    extract->add_option("--manifest", ch.manifest, "Extract every manifest image instead");
    extract->add_option("--out-dir", ch.out_dir, "Output directory with --manifest");
    bind(extract, "channels extract", [&] { run_channels_extract(ch); });

    // analyze
    AnalyzeOpts an;
    auto* analyze = sub(&app, "analyze", "PCA and ROC channel analysis");
    analyze->require_subcommand(1);
    auto* pca_cmd = sub(analyze, "pca", "Per-image and concatenated PCA");
    auto* rank_cmd = sub(analyze, "rank", "Channel ranking by loading factor and ROC area");
    auto* roc_cmd = sub(analyze, "roc", "ROC curve of one channel");
    for (auto* s : {pca_cmd, rank_cmd, roc_cmd}) {
        s->add_option("--manifest", an.manifest, "Dataset manifest");
        s->add_option("--report", an.report, "CSV output (default stdout)");
    }
    roc_cmd->add_option("--channel", an.channel, "Channel (c1..c16 or name)");
    bind(pca_cmd, "analyze pca", [&] { run_analyze_pca(an); });
    bind(rank_cmd, "analyze rank", [&] { run_analyze_rank(an); });
    bind(roc_cmd, "analyze roc", [&] { run_analyze_roc(an); });

    // train
    TrainOpts tr;
    auto* train_cmd = sub(&app, "train", "Fit a PLS model on pooled training pixels");
    train_cmd->add_option("--manifest", tr.manifest, "Training manifest");
    train_cmd->add_option("--channels", tr.channels, "Comma-separated channels");
    train_cmd->add_option("--components", tr.components, "Latent components")->check(CLI::PositiveNumber);
    train_cmd->add_option("--model", tr.model, "Output model JSON");
    bind(train_cmd, "train", [&] { run_train(tr); });

    // predict
    PredictOpts pr;
    auto* predict_cmd = sub(&app, "predict", "Probability map and mask for an image");
    predict_cmd->add_option("--model", pr.model, "Model JSON");
    predict_cmd->add_option("--input", pr.input, "Input image");
    predict_cmd->add_option("--prob", pr.prob, "Output 16-bit probability PNG");
    predict_cmd->add_option("--mask", pr.mask, "Output 8-bit mask PNG");
    predict_cmd->add_option("--threshold", pr.threshold, "Cloud iff probability >= threshold")->check(CLI::Range(0.0, 1.0));
    predict_cmd->add_option("--manifest", pr.manifest, "Predict every manifest image instead");
    predict_cmd->add_option("--out-dir", pr.out_dir, "Output directory with --manifest");
    bind(predict_cmd, "predict", [&] { run_predict(pr); });

    // binarize
    BinarizeOpts bi;
    auto* binarize_cmd = sub(&app, "binarize", "Threshold a saved probability map");
    binarize_cmd->add_option("--prob", bi.prob, "16-bit probability PNG");
    binarize_cmd->add_option("--mask", bi.mask, "Output mask PNG");
    binarize_cmd->add_option("--threshold", bi.threshold, "Cloud iff probability >= threshold")->check(CLI::Range(0.0, 1.0));
    bind(binarize_cmd, "binarize", [&] { run_binarize(bi); });

    // evaluate
    EvalOpts ev;
    auto* evaluate_cmd = sub(&app, "evaluate", "Score a model against ground truth");
    evaluate_cmd->add_option("--manifest", ev.manifest, "Test manifest");
    evaluate_cmd->add_option("--model", ev.model, "Model JSON");
    evaluate_cmd->add_option("--threshold", ev.threshold, "Binarization threshold")->check(CLI::Range(0.0, 1.0));
    evaluate_cmd->add_option("--report", ev.report, "CSV output (default stdout)");
    bind(evaluate_cmd, "evaluate", [&] { run_evaluate(ev); });

    // crossval
    CrossvalOpts cv;
    auto* cv_cmd = sub(&app, "crossval", "k-fold cross-validation");
    cv_cmd->add_option("--manifest", cv.manifest, "Dataset manifest");
    cv_cmd->add_option("--folds", cv.folds, "Number of folds")->check(CLI::Range(2, 1 << 30));
    cv_cmd->add_option("--channels", cv.channels, "Comma-separated channels of one model");
    cv_cmd->add_flag("--each-channel", cv.each_channel, "One single-channel model per channel c1..c16");
    cv_cmd->add_option("--components", cv.components, "Latent components")->check(CLI::PositiveNumber);
    cv_cmd->add_option("--threshold", cv.threshold, "Binarization threshold")->check(CLI::Range(0.0, 1.0));
    cv_cmd->add_flag("--per-image", cv.per_image, "Include per-image rows");
    cv_cmd->add_option("--report", cv.report, "CSV output (default stdout)");
    bind(cv_cmd, "crossval", [&] { run_crossval(cv); });

    // rocsweep
    SweepOpts sw;
    auto* sweep_cmd = sub(&app, "rocsweep", "ROC of the thresholded probability map over random splits");
    sweep_cmd->add_option("--manifest", sw.manifest, "Dataset manifest");
    sweep_cmd->add_option("--channels", sw.channels, "Comma-separated channels");
    sweep_cmd->add_option("--components", sw.components, "Latent components")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--trials", sw.trials, "Random train/test splits")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--step", sw.step, "Threshold step over [0,1]");
    sweep_cmd->add_option("--report", sw.report, "CSV output (default stdout)");
    bind(sweep_cmd, "rocsweep", [&] { run_rocsweep(sw); });

    // benchmark
    BenchOpts be;
    auto* bench_cmd = sub(&app, "benchmark", "Compare baselines and PLS on a test set");
    bench_cmd->add_option("--manifest", be.manifest, "Test manifest");
    bench_cmd->add_option("--methods", be.methods, "Comma-separated: long, souza, li, pls");
    bench_cmd->add_option("--model", be.model, "Model JSON (required for pls)");
    bench_cmd->add_option("--threshold", be.threshold, "PLS binarization threshold")->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--long-threshold", be.long_threshold, "Cloud iff R/B >= value");
    bench_cmd->add_option("--souza-threshold", be.souza_threshold, "Cloud iff S <= value");
    bench_cmd->add_option("--li-threshold", be.li_threshold, "Fixed (B-R)/(B+R) threshold for uniform images");
    bench_cmd->add_option("--li-std-cutoff", be.li_std_cutoff, "Std below which the fixed threshold applies");
    bench_cmd->add_option("--report", be.report, "CSV output (default stdout)");
    bind(bench_cmd, "benchmark", [&] { run_benchmark_cmd(be); });

    // breakdown
    BreakdownOpts bd;
    auto* bd_cmd = sub(&app, "breakdown", "Mean F-score per metadata bin");
    bd_cmd->add_option("--manifest", bd.manifest, "Manifest with metadata");
    bd_cmd->add_option("--model", bd.model, "Model JSON");
    bd_cmd->add_option("--by", bd.by, "time_of_day, cloud_coverage or sun_distance");
    bd_cmd->add_option("--bin-width", bd.bin_width, "Bin width (default 60 min, 0.1, 10 degrees)");
    bd_cmd->add_option("--threshold", bd.threshold, "Binarization threshold")->check(CLI::Range(0.0, 1.0));
    bd_cmd->add_option("--report", bd.report, "CSV output (default stdout)");
    bind(bd_cmd, "breakdown", [&] { run_breakdown(bd); });

    // synth
    SynthOpts sy;
    auto* synth_cmd = sub(&app, "synth", "Generate a synthetic sky/cloud dataset");
    synth_cmd->add_option("--images", sy.images, "Number of images")->check(CLI::Range(2, 1 << 20));
    synth_cmd->add_option("--size", sy.size, "Image side in pixels")->check(CLI::Range(16, 1 << 15));
    synth_cmd->add_option("--noise", sy.noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--coverages", sy.coverages, "Cloud fractions, cycled (default random)")->delimiter(',');
    synth_cmd->add_option("--out", sy.out, "Output directory");
    bind(synth_cmd, "synth", [&] { run_synth(sy); });

    // undistort
    UndistortOpts un;
    auto* und_cmd = sub(&app, "undistort", "Perspective patch from an equidistant fisheye image");
    und_cmd->add_option("--input", un.input, "Fisheye image");
    und_cmd->add_option("--focal", un.focal, "Pixels per radian (default fits the largest circle)");
    und_cmd->add_option("--center", un.center, "cx,cy (default image centre)");
    und_cmd->add_option("--max-theta", un.max_theta_deg, "Fisheye half-angle in degrees");
    und_cmd->add_option("--azimuth", un.azimuth, "Degrees from +x toward +y");
    und_cmd->add_option("--elevation", un.elevation, "Degrees above the horizon");
    und_cmd->add_option("--fov", un.fov, "Field of view in degrees");
    und_cmd->add_option("--size", un.size, "Output side in pixels")->check(CLI::Range(16, 1 << 15));
    und_cmd->add_option("--output", un.output, "Output PNG");
    bind(und_cmd, "undistort", [&] { run_undistort(un); });

    // convert-manifest
    ConvertOpts co;
    auto* conv_cmd = sub(&app, "convert-manifest", "Manifest from X.png / X_GT.png pairs in a directory");
    conv_cmd->add_option("--dir", co.dir, "Directory of image/mask pairs");
    conv_cmd->add_option("--name", co.name, "Dataset name (HYTA and SWIMSEG select their published splits)");
    conv_cmd->add_option("--gt-suffix", co.gt_suffix, "Mask file suffix");
    conv_cmd->add_option("--manifest", co.manifest, "Output manifest JSON");
    bind(conv_cmd, "convert-manifest", [&] { run_convert(co); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string message = e.what();
        if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
            message = std::string("unknown subcommand '") + argv[1] + "'";
        }
        const int code = fail(ErrorKind::validation, message);
        std::cerr << app.help();
        return code;
    }

    try {
        configure_logging();
        kernels::set_thread_count(g.jobs);
        if (!action) throw ValidationError("no subcommand given");
        action();
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(ErrorKind::io, e.what());
    } catch (const std::exception& e) {
        return fail(ErrorKind::numerical, e.what());
    }
    return 0;
}
