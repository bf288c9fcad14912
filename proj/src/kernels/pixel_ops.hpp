#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>

#include "cloudseg/fisheye.hpp"

namespace cloudseg::kernels::detail {

inline Rgb trace_pixel(const Image& src, const FisheyeCalibration& cal, const VirtualCamera& camera, int col,
                       int row) {
    const auto hit = try_project_ray(cal, camera.ray(col, row));
    if (!hit) return {};
    Rgb p = sample_bilinear(src, hit->x(), hit->y());
    p.r = std::clamp(p.r, 0.0, 1.0);
    p.g = std::clamp(p.g, 0.0, 1.0);
    p.b = std::clamp(p.b, 0.0, 1.0);
    return p;
}

inline Moments block_moments(const Eigen::MatrixXd& samples, Eigen::Index first, Eigen::Index rows) {
    const auto block = samples.middleRows(first, rows);
    Moments m;
    m.count = rows;
    m.mean = block.colwise().mean().transpose();
    const Eigen::MatrixXd centred = block.rowwise() - m.mean.transpose();
    m.comoment = centred.transpose() * centred;
    return m;
}

}  // namespace cloudseg::kernels::detail
