#pragma once

// The three concrete Lagrangians: the lattice model on R^{1,1} x S^1, the
// clipped polynomial on S^2, and the spectral Lagrangian of a causal fermion
// system in small dimension. The first two also provide one-sided directional
// derivatives in their first argument.

#include "cvp/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <random>
#include <vector>

namespace cvp {

enum class Side { plus, minus };

/// One-sided directional derivative with values in R u {+inf, -inf}.
///
/// `jump` is the limit of L(F_tau x, y) - L(x, y) as tau -> 0 from the chosen
/// side, and `slope` the derivative of the continuous remainder. A non-zero jump
/// makes the semi-derivative infinite with the jump's sign.
struct SemiDerivative {
    double jump = 0.0;
    double slope = 0.0;
    bool analytic = true;

    double value() const {
        if (jump > 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        if (jump < 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        return slope;
    }
    bool finite() const { return jump == 0.0; }

    SemiDerivative& operator+=(const SemiDerivative& o) {
        jump += o.jump;
        slope += o.slope;
        analytic = analytic && o.analytic;
        return *this;
    }
    friend SemiDerivative operator*(double w, SemiDerivative d) {
        d.jump *= w;
        d.slope *= w;
        return d;
    }
};

// ---------------------------------------------------------------------------
// Lattice model

struct LatticeParams {
    double eps = 0.1;
    double delta = 1.0;
    double lambda_I = 2.0;
    double lambda_A = 5.0;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// L(x,y) = lambda_A chi_A + lambda_I chi_I + V f + delta chi_{B_eps(0,0)} V^2
/// evaluated on the difference x - y, with V(phi) = 1 - cos(phi).
/// All characteristic functions are of open sets (strict inequalities).
class LatticeLagrangian {
public:
    using point_type = LatticePoint;
    using tangent_type = LatticeTangent;

    /// spatial_period > 0 wraps the s-difference into [-W/2, W/2).
    explicit LatticeLagrangian(LatticeParams params, double spatial_period = 0.0);

    double operator()(const LatticePoint& x, const LatticePoint& y) const;

    /// Value as a function of the difference (dt, ds, dphi).
    double on_difference(double dt, double ds, double dphi) const;

    /// The sign function chi_{B(0,1)} + chi_{B(0,-1)} - chi_{B(1,0)} - chi_{B(-1,0)} in (t, s) coordinates.
    double f(double dt, double ds) const;

    /// (t, s) difference x - y, with s taken modulo the spatial period.
    std::array<double, 2> displacement(const LatticePoint& x, const LatticePoint& y) const;

    SemiDerivative semi_derivative(const LatticePoint& x, const LatticePoint& y, const LatticeTangent& v,
                                   Side side) const;

    /// L(x, y) = 0 whenever max(|dt|, |ds|) >= interaction_range().
    static constexpr double interaction_range() { return 2.0; }

    /// Analytic supremum lambda_A + lambda_I + 2 + 4 delta.
    double upper_bound() const;

    const LatticeParams& params() const { return params_; }
    double spatial_period() const { return period_; }

private:
    SemiDerivative right_derivative(double dt, double ds, double dphi, const LatticeTangent& v) const;

    LatticeParams params_;
    double period_;
};

inline double lattice_V(double phi) { return 1.0 - std::cos(phi); }

// ---------------------------------------------------------------------------
// Sphere model

struct SphereParams {
    double tau = 1.4142135623730951;  // sqrt(2)

    void validate() const;
};

/// L = max(0, D) with D(c) = 2 tau^2 (1 + c)(2 - tau^2 (1 - c)), c = <x, y>.
class SphereLagrangian {
public:
    using point_type = SpherePoint;
    using tangent_type = Eigen::Vector3d;

    explicit SphereLagrangian(SphereParams params = {});

    double operator()(const SpherePoint& x, const SpherePoint& y) const;

    double D_of_cos(double c) const;
    double dD_dcos(double c) const;
    double D_of_angle(double theta) const { return D_of_cos(std::cos(theta)); }
    /// dD/dtheta = -sin(theta) dD/dc.
    double dD_dangle(double theta) const { return -std::sin(theta) * dD_dcos(std::cos(theta)); }

    /// One-sided derivative of max(0, D(c(tau))) given c(0) = c and c'(0) = dc.
    /// Values of D within kKinkTolerance of zero are treated as the kink.
    SemiDerivative slope_in_cos(double c, double dc, Side side) const;

    SemiDerivative semi_derivative(const SpherePoint& x, const SpherePoint& y, const Eigen::Vector3d& v,
                                   Side side) const;

    double upper_bound() const;
    const SphereParams& params() const { return params_; }

    static constexpr double kKinkTolerance = 1e-12;

private:
    SphereParams params_;
};

// ---------------------------------------------------------------------------
// Causal fermion system Lagrangian

struct CfsParams {
    int n = 1;           // spin dimension
    double kappa = 1.0;  // boundedness multiplier
    double c = 1.0;      // local trace

    void validate() const;
};

inline constexpr int kCfsMaxDimension = 8;

/// The 2n non-trivial eigenvalues of xy (zero-padded), computed from the
/// product restricted to the image of y. x and y must be self-adjoint with
/// rank(y) <= 2n and dimension <= kCfsMaxDimension.
std::vector<std::complex<double>> cfs_nontrivial_eigenvalues(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                                                             int n);

/// (1/4n) sum_{i,j} (|l_i| - |l_j|)^2 + kappa (sum_i |l_i|)^2 over the eigenvalues of xy.
double cfs_lagrangian(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y, const CfsParams& params);

/// Random self-adjoint operator on C^dimension with n positive and n negative
/// eigenvalues (moduli uniform in [0.2, 2]) along Gaussian random directions.
Eigen::MatrixXcd cfs_random_operator(int dimension, int n, std::mt19937_64& rng);

class CfsLagrangian {
public:
    explicit CfsLagrangian(CfsParams params);
    double operator()(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) const {
        return cfs_lagrangian(x, y, params_);
    }
    const CfsParams& params() const { return params_; }

private:
    CfsParams params_;
};

// ---------------------------------------------------------------------------
// Finite-difference fallback

/// One-sided finite differences with steps 1e-4 and 5e-5 combined by Richardson
/// extrapolation. The result is flagged non-analytic.
template <class Lag, class P, class T>
SemiDerivative numeric_semi_derivative(const Lag& lag, const P& x, const P& y, const T& v, Side side) {
    constexpr double h1 = 1e-4;
    constexpr double h2 = 5e-5;
    const double sign = side == Side::plus ? 1.0 : -1.0;
    const double base = lag(x, y);
    const double d1 = (lag(advance(x, v, sign * h1), y) - base) / h1;
    const double d2 = (lag(advance(x, v, sign * h2), y) - base) / h2;
    SemiDerivative out;
    out.slope = sign * (2.0 * d2 - d1);
    out.analytic = false;
    return out;
}

}  // namespace cvp
