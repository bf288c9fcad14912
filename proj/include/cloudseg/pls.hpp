#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "cloudseg/color_channels.hpp"
#include "cloudseg/dataset_io.hpp"
#include "cloudseg/image.hpp"
#include "cloudseg/moments.hpp"

namespace cloudseg {

/// Per-pixel features: one column per selected channel.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<ChannelId> channel_ids;

    void validate() const;
};

FeatureMatrix make_features(const Image& img, std::span<const ChannelId> channels);

/// Mask labels as 0/1 reals.
std::vector<double> label_values(const Mask& mask);

struct PlsModel {
    Eigen::VectorXd coefficients;  // B, one per channel
    Eigen::VectorXd x_means;
    double y_mean = 0.0;
    int num_components = 1;
    std::vector<ChannelId> channel_ids;
    nlohmann::json training_meta = nlohmann::json::object();

    void validate() const;
};

/// Latent structure of a SIMPLS fit for a single response. Column a of `weights` maps centred X
/// to the unit-norm score t_a = Xc * weights.col(a).
struct SimplsFit {
    Eigen::MatrixXd weights;       // W (k x a)
    Eigen::MatrixXd x_loadings;    // P = Xc^T T (k x a)
    Eigen::VectorXd y_loadings;    // C = yc^T T (a)
    Eigen::VectorXd coefficients;  // B = W (P^T W)^-1 C^T
    int components = 0;            // extracted; < requested only when no covariance is left
};

/// SIMPLS on joint moments of [X | y] (the last column is the response). Only the centred
/// cross-product matrices are used, so pooled per-image moments train exactly like stacked data.
/// Throws NumericalError("degenerate feature") for zero-variance or linearly dependent features.
SimplsFit simpls(const Moments& joint, int components);

/// Moments of [features | labels].
Moments joint_moments(const FeatureMatrix& features, std::span<const double> labels);

/// Per-image training statistics for a sample (features from `channels`).
Moments image_training_moments(const Image& img, const Mask& mask, std::span<const ChannelId> channels);

PlsModel train_from_moments(const Moments& joint, std::vector<ChannelId> channels, int components);
PlsModel train(const FeatureMatrix& features, std::span<const double> labels, int components);

/// Pixel-pooled training over every manifest entry.
PlsModel train_from_manifest(const DatasetManifest& manifest, std::span<const ChannelId> channels, int components,
                             std::optional<int> binarize_gt = std::nullopt);

/// (X - x_means) B + y_mean.
std::vector<double> predict_raw(const PlsModel& model, const FeatureMatrix& features);

/// Min-max normalisation to [0,1]; a constant input gives 0.5 everywhere and sets `degenerate`.
ProbabilityMap normalize_belongingness(std::span<const double> raw, int width, int height);

ProbabilityMap predict(const PlsModel& model, const FeatureMatrix& features, int width, int height);
ProbabilityMap predict_image(const PlsModel& model, const Image& img);

/// value >= threshold is cloud. Throws ValidationError for a threshold outside [0,1].
Mask binarize(const ProbabilityMap& prob, double threshold = 0.5);

}  // namespace cloudseg
