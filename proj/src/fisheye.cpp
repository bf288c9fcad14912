#include "cloudseg/fisheye.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cloudseg/kernels.hpp"

namespace cloudseg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Tolerance on the fisheye rim so that exact max_theta directions round-trip.
constexpr double kRimTolerance = 1e-12;

}  // namespace

void FisheyeCalibration::validate(int source_width, int source_height) const {
    if (!(focal > 0.0) || !std::isfinite(focal)) throw ValidationError("fisheye focal must be > 0");
    if (!(cx >= 0.0 && cx <= source_width - 1.0 && cy >= 0.0 && cy <= source_height - 1.0)) {
        throw ValidationError("fisheye centre outside the source image");
    }
    if (!(max_theta > 0.0 && max_theta <= std::numbers::pi / 2.0)) {
        throw ValidationError("max_theta must be in (0, pi/2]");
    }
}

void ViewSpec::validate() const {
    if (!(elevation_deg > 0.0)) throw ValidationError("view below horizon: elevation must be > 0");
    if (elevation_deg > 90.0) throw ValidationError("elevation must be <= 90 degrees");
    if (!(fov_deg > 0.0 && fov_deg < 180.0)) throw ValidationError("fov must be in (0, 180) degrees");
    if (out_size < 16) throw ValidationError("output size must be >= 16");
}

Eigen::Vector3d view_direction(double azimuth_deg, double elevation_deg) {
    const double az = azimuth_deg * kDeg;
    const double el = elevation_deg * kDeg;
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

std::optional<Eigen::Vector2d> try_project_ray(const FisheyeCalibration& cal, const Eigen::Vector3d& direction) {
    if (!(direction.z() >= 0.0)) return std::nullopt;
    const double planar = std::hypot(direction.x(), direction.y());
    const double theta = std::atan2(planar, direction.z());
    if (theta > cal.max_theta + kRimTolerance) return std::nullopt;
    const double radius = cal.focal * theta;
    if (planar == 0.0) return Eigen::Vector2d(cal.cx, cal.cy);
    return Eigen::Vector2d(cal.cx + radius * direction.x() / planar, cal.cy + radius * direction.y() / planar);
}

Eigen::Vector2d project_ray(const FisheyeCalibration& cal, const Eigen::Vector3d& direction) {
    if (!(direction.z() >= 0.0)) throw ValidationError("direction below horizon");
    auto p = try_project_ray(cal, direction);
    if (!p) throw ValidationError("direction outside the fisheye field of view");
    return *p;
}

Eigen::Vector3d back_project(const FisheyeCalibration& cal, double x, double y) {
    const double dx = x - cal.cx;
    const double dy = y - cal.cy;
    const double radius = std::hypot(dx, dy);
    const double theta = radius / cal.focal;
    if (theta > cal.max_theta + kRimTolerance) throw ValidationError("pixel outside the fisheye circle");
    if (radius == 0.0) return {0.0, 0.0, 1.0};
    const double s = std::sin(theta) / radius;
    return {dx * s, dy * s, std::cos(theta)};
}

VirtualCamera::VirtualCamera(const ViewSpec& view) {
    view.validate();
    const double az = view.azimuth_deg * kDeg;
    forward_ = view_direction(view.azimuth_deg, view.elevation_deg);
    // Horizontal tangent of the azimuth circle; well defined at the zenith too.
    right_ = Eigen::Vector3d(-std::sin(az), std::cos(az), 0.0);
    up_ = forward_.cross(right_);

    size_ = view.out_size;
    centre_ = (view.out_size - 1) / 2.0;
    const double half_tan = std::tan(view.fov_deg * kDeg / 2.0);
    const double half_extent = view.convention == FovConvention::diagonal
                                   ? view.out_size * std::numbers::sqrt2 / 2.0
                                   : view.out_size / 2.0;
    focal_ = half_extent / half_tan;
}

Eigen::Vector3d VirtualCamera::ray(double col, double row) const {
    Eigen::Vector3d d = focal_ * forward_ + (col - centre_) * right_ - (row - centre_) * up_;
    return d.normalized();
}

std::optional<Eigen::Vector2d> VirtualCamera::pixel(const Eigen::Vector3d& direction) const {
    const double depth = direction.dot(forward_);
    if (!(depth > 0.0)) return std::nullopt;
    const double scale = focal_ / depth;
    return Eigen::Vector2d(centre_ + scale * direction.dot(right_), centre_ - scale * direction.dot(up_));
}

Rgb sample_bilinear(const Image& src, double x, double y) {
    const double max_x = src.width() - 1.0;
    const double max_y = src.height() - 1.0;
    x = std::clamp(x, 0.0, max_x);
    y = std::clamp(y, 0.0, max_y);
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, src.width() - 1);
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;

    const Rgb& a = src.at(x0, y0);
    const Rgb& b = src.at(x1, y0);
    const Rgb& c = src.at(x0, y1);
    const Rgb& d = src.at(x1, y1);
    const double wa = (1.0 - fx) * (1.0 - fy);
    const double wb = fx * (1.0 - fy);
    const double wc = (1.0 - fx) * fy;
    const double wd = fx * fy;
    return {wa * a.r + wb * b.r + wc * c.r + wd * d.r,
            wa * a.g + wb * b.g + wc * c.g + wd * d.g,
            wa * a.b + wb * b.b + wc * c.b + wd * d.b};
}

Image undistort(const Image& src, const FisheyeCalibration& cal, const ViewSpec& view) {
    cal.validate(src.width(), src.height());
    const VirtualCamera camera(view);
    return kernels::parallel::undistort(src, cal, camera);
}

}  // namespace cloudseg
