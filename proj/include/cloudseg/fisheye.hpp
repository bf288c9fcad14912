#pragma once

#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "cloudseg/image.hpp"

namespace cloudseg {

// World frame: z points to the zenith (the fisheye optical axis); x and y follow the
// source image's column and row axes. Azimuth is measured in the horizontal plane from
// +x towards +y, elevation from the horizon.

/// Equidistant circular fisheye: image radius = focal * (angle from optical axis).
struct FisheyeCalibration {
    double focal = 0.0;  // pixels per radian
    double cx = 0.0;
    double cy = 0.0;
    double max_theta = std::numbers::pi / 2.0;

    void validate(int source_width, int source_height) const;
};

enum class FovConvention { diagonal, horizontal };

struct ViewSpec {
    double azimuth_deg = 0.0;
    double elevation_deg = 90.0;
    double fov_deg = 62.0;
    int out_size = 600;
    FovConvention convention = FovConvention::diagonal;

    void validate() const;
};

/// Unit vector for an (azimuth, elevation) pair in degrees.
Eigen::Vector3d view_direction(double azimuth_deg, double elevation_deg);

/// Source pixel hit by a direction, or nullopt below the horizon / beyond max_theta.
std::optional<Eigen::Vector2d> try_project_ray(const FisheyeCalibration& cal, const Eigen::Vector3d& direction);

/// Throws ValidationError for directions below the horizon or outside the fisheye circle.
Eigen::Vector2d project_ray(const FisheyeCalibration& cal, const Eigen::Vector3d& direction);

/// Unit direction for a source pixel; throws ValidationError outside the fisheye circle.
Eigen::Vector3d back_project(const FisheyeCalibration& cal, double x, double y);

/// Pinhole camera at the hemisphere centre. Pixel centres sit at integer coordinates and
/// the optical axis passes through ((size-1)/2, (size-1)/2).
class VirtualCamera {
public:
    explicit VirtualCamera(const ViewSpec& view);

    /// Unit ray through a (possibly fractional) output pixel position.
    Eigen::Vector3d ray(double col, double row) const;

    /// Output pixel position of a direction; nullopt if it points behind the camera.
    std::optional<Eigen::Vector2d> pixel(const Eigen::Vector3d& direction) const;

    double focal() const noexcept { return focal_; }
    int size() const noexcept { return size_; }
    const Eigen::Vector3d& forward() const noexcept { return forward_; }

private:
    Eigen::Vector3d forward_;
    Eigen::Vector3d right_;
    Eigen::Vector3d up_;
    double focal_ = 0.0;
    double centre_ = 0.0;
    int size_ = 0;
};

/// Bilinear interpolation with edge clamping; (x, y) in pixel-centre coordinates.
Rgb sample_bilinear(const Image& src, double x, double y);

/// Render a perspective patch by tracing each output ray onto the fisheye image.
/// Rays beyond max_theta produce black pixels.
Image undistort(const Image& src, const FisheyeCalibration& cal, const ViewSpec& view);

}  // namespace cloudseg
