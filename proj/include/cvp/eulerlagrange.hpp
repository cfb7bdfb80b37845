#pragma once

// The potential ell(x) = int L(x, y) d rho(y) - nu/2, its calibration,
// strong and weak Euler-Lagrange checks, and jets (a, u) with their derivative
// nabla_u = a + D_u and commutator.

#include "cvp/geometry.hpp"
#include "cvp/lagrangians.hpp"
#include "cvp/lattice_window.hpp"
#include "cvp/measures.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvp {

/// A one-jet on the support of a reference measure: scalar component a and
/// vector component u, indexed by atom. Off the support the jet is extended
/// locally constant.
template <class Tangent>
struct Jet {
    std::vector<double> scalar;
    std::vector<Tangent> vector;

    static Jet zero(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<Tangent>(n, zero_tangent<Tangent>())}; }

    std::size_t size() const { return scalar.size(); }

    void check_size(std::size_t n) const {
        if (scalar.size() != n || vector.size() != n) {
            throw std::invalid_argument("jet: component sizes do not match the support (" + std::to_string(n) +
                                        " atoms)");
        }
    }
};

using LatticeJet = Jet<LatticeTangent>;
using SphereJet = Jet<Eigen::Vector3d>;

/// int L(x, y) d rho(y), summed over every atom.
template <class P, PairLagrangian<P> L>
double potential(const P& x, const DiscreteMeasure<P>& rho, const L& lag) {
    double out = 0.0;
    for (const auto& a : rho.atoms()) {
        out += a.weight * lag(x, a.point);
    }
    return out;
}

template <class P, PairLagrangian<P> L>
double ell(const P& x, const DiscreteMeasure<P>& rho, const L& lag, double nu) {
    return potential(x, rho, lag) - 0.5 * nu;
}

/// Lattice ell summing only atoms within interaction range of x. Equal to the
/// full sum whenever x lies at least two time units inside the window.
double lattice_ell(const LatticePoint& x, const LatticeWindow& window, const LatticeLagrangian& lag, double nu);

/// nu = 2 min_{probes} int L(x, .) d rho, so that inf ell over the probes is zero.
template <class P, PairLagrangian<P> L>
double calibrate_nu(const DiscreteMeasure<P>& rho, const L& lag, std::span<const P> probes) {
    if (probes.empty()) {
        throw std::invalid_argument("calibrate_nu: empty probe set");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : probes) {
        best = std::min(best, potential(x, rho, lag));
    }
    return 2.0 * best;
}

/// nabla_u g(x) = a(x) g(x) + (D_u g)(x).
inline double nabla_jet(double scalar_component, double field_value, double directional_derivative) {
    return scalar_component * field_value + directional_derivative;
}

/// One-sided derivative of int L(., y) d rho(y) at x along v.
template <class P, class Lag, class T>
SemiDerivative potential_semi_derivative(const P& x, const T& v, const DiscreteMeasure<P>& rho, const Lag& lag,
                                         Side side) {
    SemiDerivative out;
    for (const auto& a : rho.atoms()) {
        out += a.weight * lag.semi_derivative(x, a.point, v, side);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strong EL check

struct ProbeSpec {
    std::size_t count = 10000;  // per probe family
    std::uint64_t seed = 42;
    double phi_min = 0.1;  // twisted lattice probes use |phi| >= phi_min
};

struct ProbeFamilyStats {
    std::string name;
    std::size_t count = 0;
    double min_ell = 0.0;
    double max_ell = 0.0;
};

struct ElReport {
    double sup_ell_on_support = 0.0;  // sup |ell| over valid-interior atoms
    double min_ell_on_probes = 0.0;
    double nu_used = 0.0;
    std::size_t probe_count = 0;
    std::size_t atoms_checked = 0;
    std::uint64_t seed = 0;
    std::vector<ProbeFamilyStats> families;
};

struct LatticeProbeFamily {
    std::string name;
    std::vector<LatticePoint> points;
};

/// Deterministic probe clouds around valid-interior atoms:
///  "off_lattice_flat": (t,s) offsets in (0,1)^2, phi = 0
///  "off_lattice":      (t,s) offsets in (0,1)^2, random phi
///  "lattice_twisted":  lattice (t,s), phi uniform with |phi| >= phi_min
std::vector<LatticeProbeFamily> lattice_probes(const LatticeWindow& window, const ProbeSpec& spec);

/// Uniform random points on the sphere away from the support.
std::vector<SpherePoint> sphere_probes(const DiscreteMeasure<SpherePoint>& rho, const ProbeSpec& spec);

/// nu from valid-interior atoms and the probe clouds.
double calibrate_nu(const LatticeWindow& window, const LatticeLagrangian& lag, const ProbeSpec& spec);

ElReport el_check(const LatticeWindow& window, const LatticeLagrangian& lag, double nu, const ProbeSpec& spec);
ElReport el_check(const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag, double nu,
                  const ProbeSpec& spec);

// ---------------------------------------------------------------------------
// Weak EL equations

struct WeakElReport {
    double min_value = 0.0;     // min over atoms of nabla^side_u ell
    double max_abs = 0.0;       // max over atoms of |nabla^side_u ell|
    double max_side_gap = 0.0;  // max |nabla^+ - nabla^-|; +inf if either side is infinite
    bool sides_agree = true;
    std::size_t atoms_checked = 0;
};

/// nabla^side_u ell(x) = a(x) ell(x) + D^side_u ell(x) on the given atoms.
template <class P, class Lag, class T>
WeakElReport weak_el_residual(const DiscreteMeasure<P>& rho, const Lag& lag, double nu, const Jet<T>& jet, Side side,
                              std::span<const std::size_t> atoms, double agree_tol = 1e-8) {
    jet.check_size(rho.size());
    WeakElReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i : atoms) {
        const P& x = rho.point(i);
        const double e = ell(x, rho, lag, nu);
        const auto plus = potential_semi_derivative(x, jet.vector[i], rho, lag, Side::plus);
        const auto minus = potential_semi_derivative(x, jet.vector[i], rho, lag, Side::minus);
        const double vp = nabla_jet(jet.scalar[i], e, plus.value());
        const double vm = nabla_jet(jet.scalar[i], e, minus.value());
        const double v = side == Side::plus ? vp : vm;
        rep.min_value = std::min(rep.min_value, v);
        rep.max_abs = std::max(rep.max_abs, std::abs(v));
        const double gap = (plus.finite() && minus.finite()) ? std::abs(vp - vm)
                                                             : std::numeric_limits<double>::infinity();
        rep.max_side_gap = std::max(rep.max_side_gap, gap);
        ++rep.atoms_checked;
    }
    rep.sides_agree = rep.max_side_gap <= agree_tol;
    return rep;
}

/// True iff D^+_v ell(x) = -D^+_{-v} ell(x) up to 1e-6 (1 + |D^+_v ell(x)|), both finite.
template <class P, class Lag, class T>
bool diff_jet_test(const DiscreteMeasure<P>& rho, const Lag& lag, const P& x, const T& v) {
    const auto fwd = potential_semi_derivative(x, v, rho, lag, Side::plus);
    const auto bwd = potential_semi_derivative(x, T(-v), rho, lag, Side::plus);
    if (!fwd.finite() || !bwd.finite()) {
        return false;
    }
    return std::abs(fwd.slope + bwd.slope) <= 1e-6 * (1.0 + std::abs(fwd.slope));
}

// ---------------------------------------------------------------------------
// Commutator

/// Supplies derivatives of jet components. Implementations decide how scalar
/// and vector fields are extended off the support.
template <class Tangent>
class JetDerivativeOracle {
public:
    virtual ~JetDerivativeOracle() = default;
    /// (D_direction field)(atom)
    virtual double derivative(std::span<const double> field, const Tangent& direction, std::size_t atom) const = 0;
    /// Lie bracket of the vector components at atom.
    virtual Tangent bracket(const Jet<Tangent>& u, const Jet<Tangent>& v, std::size_t atom) const = 0;
};

/// Locally constant extension: every derivative of a jet component vanishes.
template <class Tangent>
class LocallyConstantOracle final : public JetDerivativeOracle<Tangent> {
public:
    double derivative(std::span<const double>, const Tangent&, std::size_t) const override { return 0.0; }
    Tangent bracket(const Jet<Tangent>&, const Jet<Tangent>&, std::size_t) const override {
        return zero_tangent<Tangent>();
    }
};

/// [u, v] = (D_u b - D_v a, [u, v]).
template <class Tangent>
Jet<Tangent> jet_commutator(const Jet<Tangent>& u, const Jet<Tangent>& v, const JetDerivativeOracle<Tangent>& oracle) {
    const std::size_t n = u.size();
    u.check_size(n);
    v.check_size(n);
    auto out = Jet<Tangent>::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.scalar[i] = oracle.derivative(v.scalar, u.vector[i], i) - oracle.derivative(u.scalar, v.vector[i], i);
        out.vector[i] = oracle.bracket(u, v, i);
    }
    return out;
}

}  // namespace cvp
