#include "cloudseg/kernels.hpp"

#include <omp.h>

#include "pixel_ops.hpp"

namespace cloudseg::kernels {

namespace {
int g_default_threads = 0;
}

void set_thread_count(int n) {
    if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int thread_count() { return omp_get_max_threads(); }

namespace parallel {

std::vector<double> channel_map(const Image& img, ChannelId ch) {
    const auto px = img.pixels();
    const auto n = static_cast<std::ptrdiff_t>(px.size());
    std::vector<double> out(px.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = channel_value(px[i], ch);
    return out;
}

Eigen::MatrixXd channel_stack(const Image& img) {
    const auto px = img.pixels();
    const auto n = static_cast<std::ptrdiff_t>(px.size());
    Eigen::MatrixXd out(n, kNumChannels);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto values = channel_values(px[i]);
        for (int j = 0; j < kNumChannels; ++j) out(i, j) = values[j];
    }
    return out;
}

Eigen::MatrixXd feature_matrix(const Image& img, std::span<const ChannelId> channels) {
    const auto px = img.pixels();
    const auto n = static_cast<std::ptrdiff_t>(px.size());
    const auto k = static_cast<Eigen::Index>(channels.size());
    Eigen::MatrixXd out(n, k);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) out(i, j) = channel_value(px[i], channels[j]);
    }
    return out;
}

Moments column_moments(const Eigen::MatrixXd& samples) {
    const Eigen::Index rows = samples.rows();
    if (rows == 0) return Moments::empty(samples.cols());
    const auto blocks = static_cast<std::ptrdiff_t>((rows + kMomentBlockRows - 1) / kMomentBlockRows);
    std::vector<Moments> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const Eigen::Index first = b * kMomentBlockRows;
        partial[b] = detail::block_moments(samples, first, std::min(kMomentBlockRows, rows - first));
    }
    Moments total = Moments::empty(samples.cols());
    for (const auto& m : partial) total.merge(m);
    return total;
}

std::vector<double> linear_response(const Eigen::MatrixXd& features, const Eigen::VectorXd& x_means,
                                    const Eigen::VectorXd& coefficients, double intercept) {
    const auto n = static_cast<std::ptrdiff_t>(features.rows());
    const Eigen::Index k = features.cols();
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = intercept;
        for (Eigen::Index j = 0; j < k; ++j) acc += (features(i, j) - x_means[j]) * coefficients[j];
        out[i] = acc;
    }
    return out;
}

Image undistort(const Image& src, const FisheyeCalibration& cal, const VirtualCamera& camera) {
    const int size = camera.size();
    Image out(size, size);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) out.at(col, row) = detail::trace_pixel(src, cal, camera, col, row);
    }
    return out;
}

}  // namespace parallel

}  // namespace cloudseg::kernels
