#pragma once

// Points, tangent vectors and flows on the two configuration spaces:
//   lattice model  F = R^{1,1} x S^1   (t, s, phi)
//   sphere model   F = S^2             (unit 3-vectors)

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace cvp {

inline constexpr double kPi = std::numbers::pi;

/// Maps phi into the half-open interval [-pi, pi).
/// Throws std::invalid_argument for NaN or infinite input.
double wrap_angle(double phi);

/// Minkowski square <dx, dx> = dt^2 - ds^2.
constexpr double minkowski_interval(double dt, double ds) { return dt * dt - ds * ds; }
inline double minkowski_interval(const std::array<double, 2>& dx) {
    return minkowski_interval(dx[0], dx[1]);
}

struct LatticeTangent {
    double t = 0.0;
    double s = 0.0;
    double phi = 0.0;

    LatticeTangent operator-() const { return {-t, -s, -phi}; }
    friend LatticeTangent operator+(const LatticeTangent& a, const LatticeTangent& b) {
        return {a.t + b.t, a.s + b.s, a.phi + b.phi};
    }
    friend LatticeTangent operator-(const LatticeTangent& a, const LatticeTangent& b) {
        return {a.t - b.t, a.s - b.s, a.phi - b.phi};
    }
    friend LatticeTangent operator*(double c, const LatticeTangent& a) {
        return {c * a.t, c * a.s, c * a.phi};
    }
    bool operator==(const LatticeTangent&) const = default;
};

/// A point (t, s, phi) of R^{1,1} x S^1. phi is kept wrapped into [-pi, pi).
class LatticePoint {
public:
    LatticePoint() = default;
    LatticePoint(double t, double s, double phi = 0.0) : t_(t), s_(s), phi_(wrap_angle(phi)) {}

    double t() const { return t_; }
    double s() const { return s_; }
    double phi() const { return phi_; }

    bool operator==(const LatticePoint&) const = default;

private:
    double t_ = 0.0;
    double s_ = 0.0;
    double phi_ = 0.0;
};

/// Translation flow along a constant tangent: (t + tau v_t, s + tau v_s, phi + tau v_phi).
LatticePoint advance(const LatticePoint& x, const LatticeTangent& v, double tau);

/// A point of the unit sphere. Every constructor renormalizes.
class SpherePoint {
public:
    SpherePoint() : v_(1.0, 0.0, 0.0) {}
    explicit SpherePoint(const Eigen::Vector3d& v);
    SpherePoint(double x, double y, double z) : SpherePoint(Eigen::Vector3d(x, y, z)) {}

    const Eigen::Vector3d& vec() const { return v_; }
    double operator[](int i) const { return v_[i]; }

private:
    Eigen::Vector3d v_;
};

/// Angle in [0, pi] between two unit vectors; the inner product is clamped to [-1, 1].
double sphere_angle(const SpherePoint& x, const SpherePoint& y);

/// Clamped inner product <x, y>.
double sphere_cos(const SpherePoint& x, const SpherePoint& y);

/// Rodrigues rotation of x by angle tau about a unit axis.
SpherePoint rotate_about_axis(const SpherePoint& x, const Eigen::Vector3d& axis, double tau);

/// Removes the normal component of v at x.
Eigen::Vector3d project_tangent(const SpherePoint& x, const Eigen::Vector3d& v);

/// Geodesic (exponential-map) flow: cos(tau|v|) x + sin(tau|v|) v/|v| with v projected to T_x S^2.
SpherePoint advance(const SpherePoint& x, const Eigen::Vector3d& v, double tau);

bool points_coincide(const LatticePoint& x, const LatticePoint& y);

/// Chordal distance below kSphereMergeTolerance.
bool points_coincide(const SpherePoint& x, const SpherePoint& y);

inline constexpr double kSphereMergeTolerance = 1e-9;

template <class Tangent>
Tangent zero_tangent();

template <>
inline LatticeTangent zero_tangent<LatticeTangent>() {
    return {};
}

template <>
inline Eigen::Vector3d zero_tangent<Eigen::Vector3d>() {
    return Eigen::Vector3d::Zero();
}

}  // namespace cvp
