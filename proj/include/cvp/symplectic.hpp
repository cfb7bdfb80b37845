#pragma once

// Surface-layer bilinear form sigma_Omega(u, v) = sum_{x in Omega} sum_{y notin Omega} sigma_{u,v}(x, y)
// with sigma_{u,v}(x, y) = nabla_{1,u} nabla_{2,v} L - nabla_{1,v} nabla_{2,u} L.

#include "cvp/eulerlagrange.hpp"
#include "cvp/lagrangians.hpp"
#include "cvp/lattice_window.hpp"
#include "cvp/linfield.hpp"
#include "cvp/measures.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvp {

class RegionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Region on the lattice given by a predicate on (t, s), s in [0, W).
/// The predicate is also evaluated on the two slices just outside the window
/// to detect interactions that cross the window boundary.
struct LatticeRegion {
    std::function<bool(int, int)> contains;
    std::string name;

    std::vector<bool> members(const LatticeWindow& window) const;
};

/// Omega_{N_t}: every atom with time <= t.
LatticeRegion half_space_past(int t);

/// Atoms with t_lo <= t <= t_hi and s_lo <= s <= s_hi.
LatticeRegion lattice_box(int t_lo, int t_hi, int s_lo, int s_hi);

/// Explicit region over the atoms of a finite measure.
struct AtomRegion {
    std::vector<bool> member;
};

// ---------------------------------------------------------------------------
// Integrand

/// Lattice closed form a(x)b(y)L - b(x)a(y)L + (u(x)v(y) - v(x)u(y)) f(x - y);
/// the four side choices coincide.
double sigma_integrand(const LatticeJet& u, const LatticeJet& v, std::size_t x, std::size_t y,
                       const LatticeWindow& window, const LatticeLagrangian& lag);

/// sigma^{s,s'}_{u,v}(x, y) from one-sided mixed differences of L along the
/// exponential-map flows of the vector components.
template <class P, class Lag, class T>
double sigma_integrand(const Jet<T>& u, const Jet<T>& v, std::size_t x, std::size_t y,
                       const DiscreteMeasure<P>& rho, const Lag& lag, Side s, Side s_prime);

// ---------------------------------------------------------------------------
// Surface layer integrals

/// Sum over x in Omega and the interaction neighbours of x outside Omega.
/// Throws RegionError when Omega's boundary reaches the edge of the window.
double surface_layer_integral(const LatticeRegion& omega, const LatticeJet& u, const LatticeJet& v,
                              const LatticeWindow& window, const LatticeLagrangian& lag, bool average_sides = true);

template <class P, class Lag, class T>
double surface_layer_integral(const AtomRegion& omega, const Jet<T>& u, const Jet<T>& v,
                              const DiscreteMeasure<P>& rho, const Lag& lag, bool average_sides = true);

/// lambda_I sum_s (a(t,s) b(t+1,s) - a(t+1,s) b(t,s)) + sum_s (u(t+1,s) v(t,s) - u(t,s) v(t+1,s)).
double sigma_slice_lattice(int t, const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params);

struct SigmaReport {
    std::map<int, double> values;
    double reference = 0.0;
    double max_deviation = 0.0;
};

/// sigma_slice_lattice for every t in [t_first, t_last].
SigmaReport conservation_sweep(const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params,
                               int t_first, int t_last);

/// Every t whose slices t and t+1 are present in both states.
SigmaReport conservation_sweep(const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params);

struct SolutionPair {
    LatticeJetState u;
    LatticeJetState v;
};

/// Two solutions on slices [0, T): compact wave data in both, plus the decaying
/// scalar mode in u (evolved backwards from the last slices) and the growing one in v.
SolutionPair random_solution_pair(int time_extent, int width, const LatticeParams& params, std::mt19937_64& rng,
                                  int support = 5);

// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kMixedStep = 1e-4;

/// L(F^u_{h1} x, F^v_{h2} y) for the flows of the vector components.
template <class P, class Lag, class T>
double shifted(const Lag& lag, const P& x, const T& ux, double h1, const P& y, const T& vy, double h2) {
    return lag(advance(x, ux, h1), advance(y, vy, h2));
}

/// nabla^s_{1,u} nabla^{s'}_{2,v} L(x, y).
template <class P, class Lag, class T>
double mixed_jet_derivative(const Lag& lag, const P& x, double a, const T& ux, const P& y, double b, const T& vy,
                            Side s, Side s_prime) {
    const double h1 = s == Side::plus ? kMixedStep : -kMixedStep;
    const double h2 = s_prime == Side::plus ? kMixedStep : -kMixedStep;
    const double L00 = lag(x, y);
    const double L10 = shifted(lag, x, ux, h1, y, vy, 0.0);
    const double L01 = shifted(lag, x, ux, 0.0, y, vy, h2);
    const double L11 = shifted(lag, x, ux, h1, y, vy, h2);
    const double d1 = (L10 - L00) / h1;
    const double d2 = (L01 - L00) / h2;
    const double d12 = (L11 - L10 - L01 + L00) / (h1 * h2);
    return a * b * L00 + a * d2 + b * d1 + d12;
}

}  // namespace detail

template <class P, class Lag, class T>
double sigma_integrand(const Jet<T>& u, const Jet<T>& v, std::size_t x, std::size_t y,
                       const DiscreteMeasure<P>& rho, const Lag& lag, Side s, Side s_prime) {
    const P& px = rho.point(x);
    const P& py = rho.point(y);
    const double uv = detail::mixed_jet_derivative(lag, px, u.scalar[x], u.vector[x], py, v.scalar[y], v.vector[y], s,
                                                   s_prime);
    const double vu = detail::mixed_jet_derivative(lag, px, v.scalar[x], v.vector[x], py, u.scalar[y], u.vector[y],
                                                   s_prime, s);
    return uv - vu;
}

template <class P, class Lag, class T>
double surface_layer_integral(const AtomRegion& omega, const Jet<T>& u, const Jet<T>& v,
                              const DiscreteMeasure<P>& rho, const Lag& lag, bool average_sides) {
    u.check_size(rho.size());
    v.check_size(rho.size());
    if (omega.member.size() != rho.size()) {
        throw RegionError("surface_layer_integral: region has " + std::to_string(omega.member.size()) +
                          " entries but the measure has " + std::to_string(rho.size()) + " atoms");
    }
    const std::size_t n = rho.size();
    return reduce_rows(n, [&](std::size_t i) {
        if (!omega.member[i]) {
            return 0.0;
        }
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (omega.member[j]) {
                continue;
            }
            double val = 0.0;
            if (average_sides) {
                for (Side s : {Side::plus, Side::minus}) {
                    for (Side sp : {Side::plus, Side::minus}) {
                        val += 0.25 * sigma_integrand(u, v, i, j, rho, lag, s, sp);
                    }
                }
            } else {
                val = sigma_integrand(u, v, i, j, rho, lag, Side::plus, Side::plus);
            }
            row += rho.weight(i) * rho.weight(j) * val;
        }
        return row;
    });
}

}  // namespace cvp
