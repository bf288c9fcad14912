#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace cloudseg {

/// Column means and the centred cross-product (co-moment) matrix sum_i (x_i - mean)(x_i - mean)^T
/// of a row-sample matrix. Mergeable, so per-image statistics can be pooled exactly.
struct Moments {
    std::int64_t count = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd comoment;

    static Moments empty(Eigen::Index columns);

    Eigen::Index columns() const noexcept { return mean.size(); }

    /// Pairwise update of Chan, Golub and LeVeque; merging into an empty accumulator copies.
    void merge(const Moments& other);

    /// Sample (n-1) covariance.
    Eigen::MatrixXd covariance() const;
};

}  // namespace cloudseg
