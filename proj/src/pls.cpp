#include "cloudseg/pls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "cloudseg/kernels.hpp"
#include "for_each_index.hpp"

namespace cloudseg {

namespace {

// Relative size below which a score norm or feature variance is treated as zero.
constexpr double kDegenerateTolerance = 1e-12;
// Residual covariance (relative to the initial one) at which extraction stops early.
constexpr double kExhaustedCovariance = 1e-14;

}  // namespace

void FeatureMatrix::validate() const {
    if (values.cols() < 1) throw ValidationError("feature matrix needs at least one channel");
    if (static_cast<std::size_t>(values.cols()) != channel_ids.size()) {
        throw ValidationError("feature columns do not match channel list");
    }
    if (values.rows() < 2) throw ValidationError("insufficient pixels");
    if (!values.allFinite()) throw ValidationError("non-finite feature value");
}

FeatureMatrix make_features(const Image& img, std::span<const ChannelId> channels) {
    if (channels.empty()) throw ValidationError("empty channel list");
    for (ChannelId id : channels) channel_from_number(static_cast<int>(id));
    return {kernels::parallel::feature_matrix(img, channels), {channels.begin(), channels.end()}};
}

std::vector<double> label_values(const Mask& mask) { return {mask.labels.begin(), mask.labels.end()}; }

void PlsModel::validate() const {
    const auto k = static_cast<int>(channel_ids.size());
    if (k < 1) throw ValidationError("model has no channels");
    if (coefficients.size() != k || x_means.size() != k) throw ValidationError("model coefficient size mismatch");
    if (num_components < 1 || num_components > k) throw ValidationError("model num_components outside [1, k]");
    if (!coefficients.allFinite() || !x_means.allFinite() || !std::isfinite(y_mean)) {
        throw ValidationError("model contains non-finite values");
    }
}

SimplsFit simpls(const Moments& joint, int components) {
    const Eigen::Index k = joint.columns() - 1;
    if (k < 1) throw ValidationError("simpls needs at least one feature");
    if (components < 1 || components > k) {
        throw ValidationError("number of components must be in [1, " + std::to_string(k) + "]");
    }
    if (joint.count < 2) throw ValidationError("insufficient pixels");

    const Eigen::MatrixXd xx = joint.comoment.topLeftCorner(k, k);
    const Eigen::VectorXd xy = joint.comoment.topRightCorner(k, 1);

    for (Eigen::Index j = 0; j < k; ++j) {
        const double var = xx(j, j) / static_cast<double>(joint.count - 1);
        const double scale = std::max(1.0, joint.mean[j] * joint.mean[j]);
        if (!(var > kDegenerateTolerance * kDegenerateTolerance * scale)) {
            throw NumericalError("degenerate feature: column " + std::to_string(j) + " has zero variance");
        }
    }
    const double xx_scale = xx.diagonal().maxCoeff();

    SimplsFit fit;
    fit.weights.resize(k, components);
    fit.x_loadings.resize(k, components);
    fit.y_loadings.resize(components);
    Eigen::MatrixXd basis(k, components);  // orthonormal span of the loadings

    Eigen::VectorXd s = xy;
    const double initial_norm = s.norm();
    int a = 0;
    for (; a < components; ++a) {
        if (!(s.norm() > kExhaustedCovariance * initial_norm)) break;

        // Single response: the dominant singular vector of S is S itself.
        Eigen::VectorXd r = s / s.norm();
        const double tt = r.dot(xx * r);
        if (!(tt > kDegenerateTolerance * xx_scale)) throw NumericalError("degenerate feature: singular deflation");
        r /= std::sqrt(tt);  // t = Xc r now has unit norm

        const Eigen::VectorXd p = xx * r;  // Xc^T t
        const double c = xy.dot(r);       // yc^T t

        Eigen::VectorXd v = p;
        for (int pass = 0; pass < 2 && a > 0; ++pass) {
            const auto prev = basis.leftCols(a);
            v -= prev * (prev.transpose() * v);
        }
        v.normalize();
        s -= v * v.dot(s);

        fit.weights.col(a) = r;
        fit.x_loadings.col(a) = p;
        fit.y_loadings[a] = c;
        basis.col(a) = v;
    }

    fit.components = a;
    if (a < components) {
        spdlog::warn("simpls: response has no remaining covariance after {} of {} components", a, components);
    }
    fit.weights.conservativeResize(k, a);
    fit.x_loadings.conservativeResize(k, a);
    fit.y_loadings.conservativeResize(a);

    if (a == 0) {
        fit.coefficients = Eigen::VectorXd::Zero(k);
    } else {
        const Eigen::MatrixXd ptw = fit.x_loadings.transpose() * fit.weights;
        fit.coefficients = fit.weights * ptw.fullPivLu().solve(fit.y_loadings);
    }
    if (!fit.coefficients.allFinite()) throw NumericalError("degenerate feature: non-finite coefficients");
    return fit;
}

Moments joint_moments(const FeatureMatrix& features, std::span<const double> labels) {
    features.validate();
    if (static_cast<Eigen::Index>(labels.size()) != features.values.rows()) {
        throw ValidationError("label count does not match feature rows");
    }
    Eigen::MatrixXd joint(features.values.rows(), features.values.cols() + 1);
    joint.leftCols(features.values.cols()) = features.values;
    joint.col(features.values.cols()) =
        Eigen::Map<const Eigen::VectorXd>(labels.data(), static_cast<Eigen::Index>(labels.size()));
    return kernels::parallel::column_moments(joint);
}

Moments image_training_moments(const Image& img, const Mask& mask, std::span<const ChannelId> channels) {
    require_same_shape(img.width(), img.height(), mask.width, mask.height, "image vs mask");
    const auto labels = label_values(mask);
    return joint_moments(make_features(img, channels), labels);
}

PlsModel train_from_moments(const Moments& joint, std::vector<ChannelId> channels, int components) {
    if (static_cast<Eigen::Index>(channels.size()) + 1 != joint.columns()) {
        throw ValidationError("channel list does not match training moments");
    }
    const Eigen::Index k = joint.columns() - 1;
    const double y_mean = joint.mean[k];
    if (y_mean == 0.0 || y_mean == 1.0) spdlog::warn("training labels contain a single class");

    const SimplsFit fit = simpls(joint, components);
    PlsModel model;
    model.coefficients = fit.coefficients;
    model.x_means = joint.mean.head(k);
    model.y_mean = y_mean;
    model.num_components = components;
    model.channel_ids = std::move(channels);
    model.training_meta = {{"pixel_count", joint.count}};
    return model;
}

PlsModel train(const FeatureMatrix& features, std::span<const double> labels, int components) {
    const auto k = static_cast<int>(features.channel_ids.size());
    if (components < 1 || components > k) {
        throw ValidationError("number of components must be in [1, " + std::to_string(k) + "]");
    }
    return train_from_moments(joint_moments(features, labels), features.channel_ids, components);
}

PlsModel train_from_manifest(const DatasetManifest& manifest, std::span<const ChannelId> channels, int components,
                             std::optional<int> binarize_gt) {
    if (manifest.entries.empty()) throw ValidationError("empty manifest");
    manifest.require_masks();
    if (components < 1 || components > static_cast<int>(channels.size())) {
        throw ValidationError("number of components must be in [1, " + std::to_string(channels.size()) + "]");
    }
    std::vector<Moments> per_image(manifest.size());
    detail::for_each_index(manifest.size(), [&](std::size_t i) {
        const auto sample = load_sample(manifest, i, binarize_gt);
        per_image[i] = image_training_moments(sample.image, sample.mask, channels);
    });
    // Merged in manifest order so the result does not depend on scheduling.
    Moments pooled = Moments::empty(static_cast<Eigen::Index>(channels.size()) + 1);
    for (const auto& m : per_image) pooled.merge(m);
    PlsModel model = train_from_moments(pooled, {channels.begin(), channels.end()}, components);
    model.training_meta["manifest"] = manifest.name;
    model.training_meta["image_count"] = manifest.size();
    return model;
}

std::vector<double> predict_raw(const PlsModel& model, const FeatureMatrix& features) {
    model.validate();
    if (features.channel_ids != model.channel_ids) throw ValidationError("model/feature channel mismatch");
    if (!features.values.allFinite()) throw ValidationError("non-finite feature value");
    return kernels::parallel::linear_response(features.values, model.x_means, model.coefficients, model.y_mean);
}

ProbabilityMap normalize_belongingness(std::span<const double> raw, int width, int height) {
    if (raw.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) || raw.empty()) {
        throw ValidationError("prediction size does not match image dimensions");
    }
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    ProbabilityMap out;
    out.width = width;
    out.height = height;
    out.values.resize(raw.size());
    if (!(hi > lo)) {
        std::fill(out.values.begin(), out.values.end(), 0.5);
        out.degenerate = true;
        return out;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = (raw[i] - lo) / range;
    return out;
}

ProbabilityMap predict(const PlsModel& model, const FeatureMatrix& features, int width, int height) {
    if (features.values.rows() != static_cast<Eigen::Index>(width) * height) {
        throw ValidationError("feature rows do not match image dimensions");
    }
    const auto raw = predict_raw(model, features);
    return normalize_belongingness(raw, width, height);
}

ProbabilityMap predict_image(const PlsModel& model, const Image& img) {
    return predict(model, make_features(img, model.channel_ids), img.width(), img.height());
}

Mask binarize(const ProbabilityMap& prob, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("threshold must be in [0,1]");
    Mask out(prob.width, prob.height);
    for (std::size_t i = 0; i < prob.values.size(); ++i) out.labels[i] = prob.values[i] >= threshold ? 1 : 0;
    return out;
}

}  // namespace cloudseg
