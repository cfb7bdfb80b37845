#include "cvp/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace cvp {

double wrap_angle(double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("wrap_angle: non-finite angle");
    }
    if (phi >= -kPi && phi < kPi) {
        return phi;
    }
    double r = std::fmod(phi + kPi, 2.0 * kPi);
    if (r < 0.0) {
        r += 2.0 * kPi;
    }
    double out = r - kPi;
    // fmod can land exactly on the excluded endpoint after rounding
    if (out >= kPi) {
        out -= 2.0 * kPi;
    }
    return out;
}

LatticePoint advance(const LatticePoint& x, const LatticeTangent& v, double tau) {
    return {x.t() + tau * v.t, x.s() + tau * v.s, x.phi() + tau * v.phi};
}

SpherePoint::SpherePoint(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("SpherePoint: vector must be finite and non-zero");
    }
    v_ = v / n;
}

double sphere_cos(const SpherePoint& x, const SpherePoint& y) {
    return std::clamp(x.vec().dot(y.vec()), -1.0, 1.0);
}

double sphere_angle(const SpherePoint& x, const SpherePoint& y) {
    return std::acos(sphere_cos(x, y));
}

SpherePoint rotate_about_axis(const SpherePoint& x, const Eigen::Vector3d& axis, double tau) {
    const Eigen::Vector3d& p = x.vec();
    const double c = std::cos(tau);
    const double s = std::sin(tau);
    Eigen::Vector3d r = c * p + s * axis.cross(p) + (1.0 - c) * axis.dot(p) * axis;
    return SpherePoint(r);
}

Eigen::Vector3d project_tangent(const SpherePoint& x, const Eigen::Vector3d& v) {
    return v - x.vec().dot(v) * x.vec();
}

SpherePoint advance(const SpherePoint& x, const Eigen::Vector3d& v, double tau) {
    const Eigen::Vector3d w = project_tangent(x, v);
    const double n = w.norm();
    if (n == 0.0 || tau == 0.0) {
        return x;
    }
    const double a = tau * n;
    return SpherePoint(std::cos(a) * x.vec() + std::sin(a) * (w / n));
}

bool points_coincide(const LatticePoint& x, const LatticePoint& y) { return x == y; }

bool points_coincide(const SpherePoint& x, const SpherePoint& y) {
    return (x.vec() - y.vec()).norm() < kSphereMergeTolerance;
}

}  // namespace cvp
