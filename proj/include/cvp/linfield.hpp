#pragma once

// Linearized field equations <u, Delta v>|_M = 0: the pairing itself, the two
// lattice recurrences that generate solutions, and residual checks.
//
// On the lattice a linearized solution v = (b, (v_const, v_phi)) has
//   scalar:  lambda_A b(x) + lambda_I (b(x + e_t) + b(x - e_t)) = 0
//   vector:  sum_y f(x - y) v_phi(y) = 0, i.e.
//            v_phi(t+1, s) = v_phi(t, s+1) + v_phi(t, s-1) - v_phi(t-1, s)
// and a constant Minkowski translation v_const that pairs to zero.

#include "cvp/eulerlagrange.hpp"
#include "cvp/geometry.hpp"
#include "cvp/lagrangians.hpp"
#include "cvp/lattice_window.hpp"
#include "cvp/measures.hpp"

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace cvp {

/// The derivative combination a linearized field needs does not exist at some atom.
class LinearizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scalar recurrence left floating-point range.
class GrowthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LatticeSlice {
    std::vector<double> b;
    std::vector<double> v_phi;
};

/// Consecutive time slices t0, t0+1, ... of a lattice jet on a periodic width-W strip.
class LatticeJetState {
public:
    LatticeJetState(int width, int t0, std::vector<LatticeSlice> slices, std::array<double, 2> v_const = {0.0, 0.0});

    int width() const { return width_; }
    int t_begin() const { return t0_; }
    int t_end() const { return t0_ + static_cast<int>(slices_.size()); }
    std::size_t slice_count() const { return slices_.size(); }
    bool has_time(int t) const { return t >= t_begin() && t < t_end(); }

    const LatticeSlice& slice(int t) const;
    const std::vector<LatticeSlice>& slices() const { return slices_; }
    const std::array<double, 2>& v_const() const { return v_const_; }

    double b(int t, int s) const { return slice(t).b[wrap(s)]; }
    double v_phi(int t, int s) const { return slice(t).v_phi[wrap(s)]; }

    LatticeWindow window() const { return LatticeWindow(static_cast<int>(slices_.size()), width_, t0_); }

    /// Jet over window() atoms: scalar b, vector (v_const, v_phi).
    LatticeJet to_jet() const;

    /// Largest absolute entry over both components.
    double max_abs() const;

    /// a * this + c * other on the common time range (both states must match).
    LatticeJetState combine(double a, const LatticeJetState& other, double c) const;

private:
    std::size_t wrap(int s) const { return static_cast<std::size_t>(((s % width_) + width_) % width_); }

    int width_;
    int t0_;
    std::vector<LatticeSlice> slices_;
    std::array<double, 2> v_const_;
};

enum class TimeDirection { forward, backward };

inline constexpr double kGrowthLimit = 1e12;

/// Appends (forward) or prepends (backward) `steps` slices using the two
/// recurrences. Throws GrowthError once any entry exceeds kGrowthLimit.
LatticeJetState lattice_evolve(const LatticeJetState& state, const LatticeParams& params, int steps,
                               TimeDirection direction = TimeDirection::forward);

/// Roots of lambda_I r^2 + lambda_A r + lambda_I = 0 ordered (|r_minus| < 1 < |r_plus|).
struct ScalarRoots {
    double r_minus;
    double r_plus;
};
ScalarRoots scalar_characteristic_roots(const LatticeParams& params);

/// Cauchy data (two slices at t0, t0+1) of the plane wave v_phi = amplitude cos(k s - omega t + phase),
/// k = 2 pi m / W, omega = k.
LatticeJetState plane_wave_cauchy(int width, int mode, int t0 = 0, double amplitude = 1.0, double phase = 0.0);

/// Exact plane wave value for comparison.
double plane_wave_value(int width, int mode, int t, int s, double amplitude = 1.0, double phase = 0.0);

/// Two slices (t, t+1) of the scalar mode b(t, s) = root^t profile(s).
LatticeJetState scalar_mode_cauchy(const std::vector<double>& profile, double root, int t);

/// v_phi Cauchy data uniform in [-1, 1] on `support` consecutive sites from a random start, zero elsewhere.
LatticeJetState random_compact_cauchy(int width, int support, std::mt19937_64& rng, int t0 = 0);

// ---------------------------------------------------------------------------
// Pairing and residuals on the lattice

/// Coefficients of a(x) and u_phi(x) in <u, Delta v>(x) for a test jet u.
struct LatticeFieldTerms {
    double scalar = 0.0;
    double phi = 0.0;
};

/// Throws LinearizationError if v's (t, s) components differ between x and an
/// interacting neighbour so that L(F_tau x, F_tau y) has no derivative at tau = 0.
LatticeFieldTerms lattice_field_terms(const LatticeJet& v, std::size_t atom, const LatticeWindow& window,
                                      const LatticeLagrangian& lag, double nu);

/// <u, Delta v>(x) for a test jet u = (a, (0, 0, u_phi)).
double lin_pairing(const LatticeJet& u, const LatticeJet& v, std::size_t atom, const LatticeWindow& window,
                   const LatticeLagrangian& lag, double nu);

struct LinResidualReport {
    double max_scalar_residual = 0.0;
    double max_wave_residual = 0.0;
    std::size_t atoms_checked = 0;
};

/// Max |<u, Delta v>(x)| over valid-interior atoms for the test basis of
/// single-atom scalar jets and single-atom phi jets.
LinResidualReport lin_residual(const LatticeJetState& state, const LatticeParams& params, double nu);

// ---------------------------------------------------------------------------
// Sphere

/// A jet given as fields on the whole sphere, with an optional exact flow.
struct SphereJetField {
    std::function<double(const SpherePoint&)> scalar;
    std::function<Eigen::Vector3d(const SpherePoint&)> vector;
};

/// v(x) = axis x x, b = 0: the generator of rotations about `axis`.
SphereJetField rotation_field(const Eigen::Vector3d& axis);

/// The rotation jet restricted to the support of rho.
SphereJet sphere_rotation_jet(const Eigen::Vector3d& axis, const DiscreteMeasure<SpherePoint>& rho);

/// <u, Delta v>(x) = nabla_u ( int (nabla_{1,v} + nabla_{2,v}) L(x, y) d rho(y) - nabla_v nu/2 ).
/// The inner derivative is taken analytically along both flows; the outer one by
/// central differences. Throws LinearizationError where the inner derivative has no two-sided value.
double lin_pairing(const SphereJet& u, const SphereJetField& v, std::size_t atom,
                   const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag, double nu);

}  // namespace cvp
