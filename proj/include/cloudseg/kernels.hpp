#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the plain reference kept
// for testing and benchmarking, `parallel` is the OpenMP version used by the library. Parallel
// results never depend on the thread count; per-pixel kernels are bit-identical to the serial
// reference, reductions agree with it to rounding.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cloudseg/color_channels.hpp"
#include "cloudseg/fisheye.hpp"
#include "cloudseg/image.hpp"
#include "cloudseg/moments.hpp"

namespace cloudseg::kernels {

/// Rows per reduction block in parallel::column_moments. Fixed so results are thread-count independent.
inline constexpr Eigen::Index kMomentBlockRows = 4096;

/// Sets the OpenMP team size for subsequent parallel kernels; n <= 0 restores the default.
void set_thread_count(int n);
int thread_count();

namespace serial {

std::vector<double> channel_map(const Image& img, ChannelId ch);
Eigen::MatrixXd channel_stack(const Image& img);
Eigen::MatrixXd feature_matrix(const Image& img, std::span<const ChannelId> channels);
Moments column_moments(const Eigen::MatrixXd& samples);
std::vector<double> linear_response(const Eigen::MatrixXd& features, const Eigen::VectorXd& x_means,
                                    const Eigen::VectorXd& coefficients, double intercept);
Image undistort(const Image& src, const FisheyeCalibration& cal, const VirtualCamera& camera);

}  // namespace serial

namespace parallel {

std::vector<double> channel_map(const Image& img, ChannelId ch);
Eigen::MatrixXd channel_stack(const Image& img);
Eigen::MatrixXd feature_matrix(const Image& img, std::span<const ChannelId> channels);
Moments column_moments(const Eigen::MatrixXd& samples);
std::vector<double> linear_response(const Eigen::MatrixXd& features, const Eigen::VectorXd& x_means,
                                    const Eigen::VectorXd& coefficients, double intercept);
Image undistort(const Image& src, const FisheyeCalibration& cal, const VirtualCamera& camera);

}  // namespace parallel

}  // namespace cloudseg::kernels
