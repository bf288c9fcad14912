#include "cloudseg/kernels.hpp"

#include "pixel_ops.hpp"

namespace cloudseg::kernels::serial {

std::vector<double> channel_map(const Image& img, ChannelId ch) {
    const auto px = img.pixels();
    std::vector<double> out(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) out[i] = channel_value(px[i], ch);
    return out;
}

Eigen::MatrixXd channel_stack(const Image& img) {
    const auto px = img.pixels();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(px.size()), kNumChannels);
    for (std::size_t i = 0; i < px.size(); ++i) {
        const auto values = channel_values(px[i]);
        for (int j = 0; j < kNumChannels; ++j) out(static_cast<Eigen::Index>(i), j) = values[j];
    }
    return out;
}

Eigen::MatrixXd feature_matrix(const Image& img, std::span<const ChannelId> channels) {
    const auto px = img.pixels();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(px.size()), static_cast<Eigen::Index>(channels.size()));
    for (std::size_t i = 0; i < px.size(); ++i) {
        for (std::size_t j = 0; j < channels.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = channel_value(px[i], channels[j]);
        }
    }
    return out;
}

Moments column_moments(const Eigen::MatrixXd& samples) {
    if (samples.rows() == 0) return Moments::empty(samples.cols());
    return detail::block_moments(samples, 0, samples.rows());
}

std::vector<double> linear_response(const Eigen::MatrixXd& features, const Eigen::VectorXd& x_means,
                                    const Eigen::VectorXd& coefficients, double intercept) {
    std::vector<double> out(static_cast<std::size_t>(features.rows()));
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        double acc = intercept;
        for (Eigen::Index j = 0; j < features.cols(); ++j) acc += (features(i, j) - x_means[j]) * coefficients[j];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

Image undistort(const Image& src, const FisheyeCalibration& cal, const VirtualCamera& camera) {
    Image out(camera.size(), camera.size());
    for (int row = 0; row < camera.size(); ++row) {
        for (int col = 0; col < camera.size(); ++col) out.at(col, row) = detail::trace_pixel(src, cal, camera, col, row);
    }
    return out;
}

}  // namespace cloudseg::kernels::serial
