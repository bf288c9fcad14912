#include "cloudseg/moments.hpp"

#include "cloudseg/error.hpp"

namespace cloudseg {

Moments Moments::empty(Eigen::Index columns) {
    Moments m;
    m.mean = Eigen::VectorXd::Zero(columns);
    m.comoment = Eigen::MatrixXd::Zero(columns, columns);
    return m;
}

void Moments::merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    if (other.columns() != columns()) throw ValidationError("moment column count mismatch");

    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const Eigen::VectorXd delta = other.mean - mean;

    mean += delta * (nb / n);
    comoment += other.comoment + (delta * delta.transpose()) * (na * nb / n);
    count += other.count;
}

Eigen::MatrixXd Moments::covariance() const {
    if (count < 2) throw ValidationError("insufficient pixels");
    return comoment / static_cast<double>(count - 1);
}

}  // namespace cloudseg
