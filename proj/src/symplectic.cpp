#include "cvp/symplectic.hpp"

#include "cvp/reduction.hpp"

#include <cmath>

namespace cvp {

std::vector<bool> LatticeRegion::members(const LatticeWindow& window) const {
    std::vector<bool> out(window.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = contains(window.time_of(i), window.site_of(i));
    }
    return out;
}

LatticeRegion half_space_past(int t) {
    return {[t](int tt, int) { return tt <= t; }, "past(" + std::to_string(t) + ")"};
}

LatticeRegion lattice_box(int t_lo, int t_hi, int s_lo, int s_hi) {
    if (t_lo > t_hi || s_lo > s_hi) {
        throw std::invalid_argument("lattice_box: empty coordinate range");
    }
    return {[=](int t, int s) { return t >= t_lo && t <= t_hi && s >= s_lo && s <= s_hi; },
            "box[" + std::to_string(t_lo) + "," + std::to_string(t_hi) + "]x[" + std::to_string(s_lo) + "," +
                std::to_string(s_hi) + "]"};
}

double sigma_integrand(const LatticeJet& u, const LatticeJet& v, std::size_t x, std::size_t y,
                       const LatticeWindow& window, const LatticeLagrangian& lag) {
    const LatticePoint px = window.point(x);
    const LatticePoint py = window.point(y);
    const double L = lag(px, py);
    const auto d = lag.displacement(px, py);
    const double f = lag.f(d[0], d[1]);
    return (u.scalar[x] * v.scalar[y] - v.scalar[x] * u.scalar[y]) * L +
           (u.vector[x].phi * v.vector[y].phi - v.vector[x].phi * u.vector[y].phi) * f;
}

namespace {

// Omega must look the same on the last window slice and the slice beyond it,
// on both time edges, so that no boundary-crossing pair leaves the window.
void check_collars(const LatticeRegion& omega, const LatticeWindow& window) {
    const int W = window.width();
    for (const auto& [outside, inside] : {std::pair{window.t0() - 1, window.t0()},
                                         std::pair{window.t_end(), window.t_end() - 1}}) {
        const bool ref = omega.contains(inside, 0);
        for (int s = 0; s < W; ++s) {
            if (omega.contains(inside, s) != ref || omega.contains(outside, s) != ref) {
                throw RegionError("surface_layer_integral: region " + omega.name +
                                  " has boundary within interaction range of the window edge at t = " +
                                  std::to_string(inside) + " (window t in [" + std::to_string(window.t0()) + ", " +
                                  std::to_string(window.t_end()) + "))");
            }
        }
    }
}

}  // namespace

double surface_layer_integral(const LatticeRegion& omega, const LatticeJet& u, const LatticeJet& v,
                              const LatticeWindow& window, const LatticeLagrangian& lag, bool /*average_sides*/) {
    u.check_size(window.size());
    v.check_size(window.size());
    check_collars(omega, window);
    const auto member = omega.members(window);
    return reduce_rows(window.size(), [&](std::size_t i) {
        if (!member[i]) {
            return 0.0;
        }
        double row = 0.0;
        for (std::size_t j : window.neighbours(i)) {
            if (!member[j]) {
                row += sigma_integrand(u, v, i, j, window, lag);
            }
        }
        return row;
    });
}

double sigma_slice_lattice(int t, const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params) {
    if (u.width() != v.width()) {
        throw std::invalid_argument("sigma_slice_lattice: jet states have different widths");
    }
    for (const auto* st : {&u, &v}) {
        if (!st->has_time(t) || !st->has_time(t + 1)) {
            throw std::out_of_range("sigma_slice_lattice: slices " + std::to_string(t) + " and " +
                                    std::to_string(t + 1) + " required, state covers [" +
                                    std::to_string(st->t_begin()) + ", " + std::to_string(st->t_end()) + ")");
        }
    }
    const auto& u0 = u.slice(t);
    const auto& u1 = u.slice(t + 1);
    const auto& v0 = v.slice(t);
    const auto& v1 = v.slice(t + 1);
    const auto W = static_cast<std::size_t>(u.width());
    std::vector<double> scalar(W);
    std::vector<double> phi(W);
    for (std::size_t s = 0; s < W; ++s) {
        scalar[s] = u0.b[s] * v1.b[s] - u1.b[s] * v0.b[s];
        phi[s] = u1.v_phi[s] * v0.v_phi[s] - u0.v_phi[s] * v1.v_phi[s];
    }
    return params.lambda_I * pairwise_sum(scalar) + pairwise_sum(phi);
}

SolutionPair random_solution_pair(int time_extent, int width, const LatticeParams& params, std::mt19937_64& rng,
                                  int support) {
    if (time_extent < 3) {
        throw std::invalid_argument("random_solution_pair: need at least three slices");
    }
    const int steps = time_extent - 2;
    const auto r = scalar_characteristic_roots(params);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto profile = [&] {
        std::vector<double> p(width);
        for (auto& x : p) {
            x = dist(rng);
        }
        return p;
    };
    const auto wave_u = lattice_evolve(random_compact_cauchy(width, support, rng), params, steps);
    const auto wave_v = lattice_evolve(random_compact_cauchy(width, support, rng), params, steps);
    const auto scalar_u =
        lattice_evolve(scalar_mode_cauchy(profile(), r.r_minus, steps), params, steps, TimeDirection::backward);
    const auto scalar_v = lattice_evolve(scalar_mode_cauchy(profile(), r.r_plus, 0), params, steps);
    return {wave_u.combine(1.0, scalar_u, 1.0), wave_v.combine(1.0, scalar_v, 1.0)};
}

SigmaReport conservation_sweep(const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params,
                               int t_first, int t_last) {
    if (t_first > t_last) {
        throw std::invalid_argument("conservation_sweep: empty time range");
    }
    SigmaReport rep;
    for (int t = t_first; t <= t_last; ++t) {
        rep.values[t] = sigma_slice_lattice(t, u, v, params);
    }
    rep.reference = rep.values.begin()->second;
    for (const auto& [t, val] : rep.values) {
        rep.max_deviation = std::max(rep.max_deviation, std::abs(val - rep.reference));
    }
    return rep;
}

SigmaReport conservation_sweep(const LatticeJetState& u, const LatticeJetState& v, const LatticeParams& params) {
    const int lo = std::max(u.t_begin(), v.t_begin());
    const int hi = std::min(u.t_end(), v.t_end()) - 2;
    return conservation_sweep(u, v, params, lo, hi);
}

}  // namespace cvp
