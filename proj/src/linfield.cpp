#include "cvp/linfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvp {

LatticeJetState::LatticeJetState(int width, int t0, std::vector<LatticeSlice> slices, std::array<double, 2> v_const)
    : width_(width), t0_(t0), slices_(std::move(slices)), v_const_(v_const) {
    if (width_ < LatticeWindow::kMinWidth) {
        throw std::invalid_argument("jet state: width must be >= " + std::to_string(LatticeWindow::kMinWidth));
    }
    for (const auto& sl : slices_) {
        if (sl.b.size() != static_cast<std::size_t>(width_) || sl.v_phi.size() != static_cast<std::size_t>(width_)) {
            throw std::invalid_argument("jet state: every slice must have width " + std::to_string(width_));
        }
    }
}

const LatticeSlice& LatticeJetState::slice(int t) const {
    if (!has_time(t)) {
        throw std::out_of_range("jet state: slice t = " + std::to_string(t) + " not present in [" +
                                std::to_string(t_begin()) + ", " + std::to_string(t_end()) + ")");
    }
    return slices_[static_cast<std::size_t>(t - t0_)];
}

LatticeJet LatticeJetState::to_jet() const {
    const auto win = window();
    auto jet = LatticeJet::zero(win.size());
    for (std::size_t i = 0; i < win.size(); ++i) {
        const auto& sl = slice(win.time_of(i));
        const auto s = static_cast<std::size_t>(win.site_of(i));
        jet.scalar[i] = sl.b[s];
        jet.vector[i] = {v_const_[0], v_const_[1], sl.v_phi[s]};
    }
    return jet;
}

double LatticeJetState::max_abs() const {
    double m = 0.0;
    for (const auto& sl : slices_) {
        for (double x : sl.b) m = std::max(m, std::abs(x));
        for (double x : sl.v_phi) m = std::max(m, std::abs(x));
    }
    return m;
}

LatticeJetState LatticeJetState::combine(double a, const LatticeJetState& other, double c) const {
    if (other.width_ != width_ || other.t0_ != t0_ || other.slices_.size() != slices_.size()) {
        throw std::invalid_argument("jet state: combine requires identical time range and width");
    }
    auto out = slices_;
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (std::size_t s = 0; s < out[k].b.size(); ++s) {
            out[k].b[s] = a * slices_[k].b[s] + c * other.slices_[k].b[s];
            out[k].v_phi[s] = a * slices_[k].v_phi[s] + c * other.slices_[k].v_phi[s];
        }
    }
    return LatticeJetState(width_, t0_, std::move(out),
                           {a * v_const_[0] + c * other.v_const_[0], a * v_const_[1] + c * other.v_const_[1]});
}

LatticeJetState lattice_evolve(const LatticeJetState& state, const LatticeParams& params, int steps,
                               TimeDirection direction) {
    params.validate();
    if (state.slice_count() < 2) {
        throw std::invalid_argument("lattice_evolve: need at least two consecutive slices of Cauchy data");
    }
    if (steps < 0) {
        throw std::invalid_argument("lattice_evolve: steps must be non-negative");
    }
    const int W = state.width();
    const double ratio = params.lambda_A / params.lambda_I;
    std::vector<LatticeSlice> slices = state.slices();
    const bool fwd = direction == TimeDirection::forward;

    // `cur` is the slice adjacent to the new one, `prev` the one beyond it.
    for (int k = 0; k < steps; ++k) {
        const LatticeSlice& cur = fwd ? slices[slices.size() - 1] : slices[0];
        const LatticeSlice& prev = fwd ? slices[slices.size() - 2] : slices[1];
        LatticeSlice next{std::vector<double>(W), std::vector<double>(W)};
        for (int s = 0; s < W; ++s) {
            const auto sp = static_cast<std::size_t>((s + 1) % W);
            const auto sm = static_cast<std::size_t>((s + W - 1) % W);
            const auto si = static_cast<std::size_t>(s);
            next.b[si] = -ratio * cur.b[si] - prev.b[si];
            next.v_phi[si] = cur.v_phi[sp] + cur.v_phi[sm] - prev.v_phi[si];
            if (!(std::abs(next.b[si]) <= kGrowthLimit) || !(std::abs(next.v_phi[si]) <= kGrowthLimit)) {
                throw GrowthError("lattice_evolve: |field| exceeded " + std::to_string(kGrowthLimit) + " after " +
                                  std::to_string(k + 1) + " steps; the scalar recurrence has a root of modulus " +
                                  std::to_string(std::abs(scalar_characteristic_roots(params).r_plus)));
            }
        }
        if (fwd) {
            slices.push_back(std::move(next));
        } else {
            slices.insert(slices.begin(), std::move(next));
        }
    }
    const int t0 = fwd ? state.t_begin() : state.t_begin() - steps;
    return LatticeJetState(W, t0, std::move(slices), state.v_const());
}

ScalarRoots scalar_characteristic_roots(const LatticeParams& params) {
    const double a = params.lambda_I;
    const double b = params.lambda_A;
    const double disc = b * b - 4.0 * a * a;
    if (!(disc > 0.0)) {
        throw std::invalid_argument("scalar roots: need lambda_A > 2 lambda_I for distinct real roots");
    }
    // Larger-modulus root first, the other from r_plus r_minus = 1.
    const double r_plus = (-b - std::sqrt(disc)) / (2.0 * a);
    return {1.0 / r_plus, r_plus};
}

double plane_wave_value(int width, int mode, int t, int s, double amplitude, double phase) {
    const double k = 2.0 * kPi * mode / width;
    return amplitude * std::cos(k * s - k * t + phase);
}

LatticeJetState plane_wave_cauchy(int width, int mode, int t0, double amplitude, double phase) {
    std::vector<LatticeSlice> slices(2);
    for (int j = 0; j < 2; ++j) {
        slices[j].b.assign(width, 0.0);
        slices[j].v_phi.resize(width);
        for (int s = 0; s < width; ++s) {
            slices[j].v_phi[s] = plane_wave_value(width, mode, t0 + j, s, amplitude, phase);
        }
    }
    return LatticeJetState(width, t0, std::move(slices));
}

LatticeJetState scalar_mode_cauchy(const std::vector<double>& profile, double root, int t) {
    const int W = static_cast<int>(profile.size());
    std::vector<LatticeSlice> slices(2);
    const double c0 = std::pow(root, t);
    const double c1 = std::pow(root, t + 1);
    for (int j = 0; j < 2; ++j) {
        slices[j].b.resize(W);
        slices[j].v_phi.assign(W, 0.0);
        for (int s = 0; s < W; ++s) {
            slices[j].b[s] = (j == 0 ? c0 : c1) * profile[s];
        }
    }
    return LatticeJetState(W, t, std::move(slices));
}

LatticeJetState random_compact_cauchy(int width, int support, std::mt19937_64& rng, int t0) {
    if (support < 1 || support > width) {
        throw std::invalid_argument("random_compact_cauchy: support must lie in [1, width]");
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int start = static_cast<int>(rng() % static_cast<std::uint64_t>(width));
    std::vector<LatticeSlice> slices(2);
    for (auto& sl : slices) {
        sl.b.assign(width, 0.0);
        sl.v_phi.assign(width, 0.0);
        for (int k = 0; k < support; ++k) {
            sl.v_phi[(start + k) % width] = u(rng);
        }
    }
    return LatticeJetState(width, t0, std::move(slices));
}

// ---------------------------------------------------------------------------

LatticeFieldTerms lattice_field_terms(const LatticeJet& v, std::size_t atom, const LatticeWindow& window,
                                      const LatticeLagrangian& lag, double nu) {
    v.check_size(window.size());
    const LatticePoint x = window.point(atom);
    const double bx = v.scalar[atom];
    const LatticeTangent& vx = v.vector[atom];
    LatticeFieldTerms out;
    for (std::size_t j : window.neighbours(atom)) {
        const LatticePoint y = window.point(j);
        const LatticeTangent& vy = v.vector[j];
        if (vx.t != vy.t || vx.s != vy.s) {
            const LatticeTangent rel{vx.t - vy.t, vx.s - vy.s, 0.0};
            const auto plus = lag.semi_derivative(x, y, rel, Side::plus);
            const auto minus = lag.semi_derivative(x, y, rel, Side::minus);
            if (!plus.finite() || !minus.finite() || plus.slope != minus.slope) {
                throw LinearizationError("lin_pairing: (t,s) component of v is not constant between atoms (" +
                                         std::to_string(window.time_of(atom)) + "," +
                                         std::to_string(window.site_of(atom)) + ") and (" +
                                         std::to_string(window.time_of(j)) + "," + std::to_string(window.site_of(j)) +
                                         "); L(F_tau x, F_tau y) is discontinuous at tau = 0");
            }
        }
        const double L = lag(x, y);
        const auto d = lag.displacement(x, y);
        const double fv = lag.f(d[0], d[1]);
        out.scalar += L * (bx + v.scalar[j]);
        // phi-sector sign convention: second phi-derivative of L at x carries -f, the mixed one +f.
        // Differentiating V(x^phi - y^phi) directly flips the sign of the whole phi sector.
        out.phi += fv * (vy.phi - vx.phi);
    }
    out.scalar -= 0.5 * nu * bx;
    return out;
}

double lin_pairing(const LatticeJet& u, const LatticeJet& v, std::size_t atom, const LatticeWindow& window,
                   const LatticeLagrangian& lag, double nu) {
    u.check_size(window.size());
    const LatticeTangent& ux = u.vector[atom];
    if (ux.t != 0.0 || ux.s != 0.0) {
        throw std::invalid_argument("lin_pairing: test jets have vanishing (t,s) components");
    }
    const auto terms = lattice_field_terms(v, atom, window, lag, nu);
    return u.scalar[atom] * terms.scalar + ux.phi * terms.phi;
}

LinResidualReport lin_residual(const LatticeJetState& state, const LatticeParams& params, double nu) {
    const auto window = state.window();
    const auto lag = window.lagrangian(params);
    const auto v = state.to_jet();
    LinResidualReport rep;
    for (std::size_t i : window.interior_atoms()) {
        const auto terms = lattice_field_terms(v, i, window, lag, nu);
        rep.max_scalar_residual = std::max(rep.max_scalar_residual, std::abs(terms.scalar));
        rep.max_wave_residual = std::max(rep.max_wave_residual, std::abs(terms.phi));
        ++rep.atoms_checked;
    }
    return rep;
}

// ---------------------------------------------------------------------------

SphereJetField rotation_field(const Eigen::Vector3d& axis) {
    const Eigen::Vector3d a = axis.normalized();
    return {[](const SpherePoint&) { return 0.0; }, [a](const SpherePoint& p) { return Eigen::Vector3d(a.cross(p.vec())); }};
}

SphereJet sphere_rotation_jet(const Eigen::Vector3d& axis, const DiscreteMeasure<SpherePoint>& rho) {
    if (std::abs(axis.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("sphere_rotation_jet: axis must be a unit vector");
    }
    auto jet = SphereJet::zero(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        jet.vector[i] = axis.cross(rho.point(i).vec());
    }
    return jet;
}

double lin_pairing(const SphereJet& u, const SphereJetField& v, std::size_t atom,
                   const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag, double nu) {
    u.check_size(rho.size());
    // g(p) = int (nabla_{1,v} + nabla_{2,v}) L(p, y) d rho(y) - b(p) nu / 2
    auto g = [&](const SpherePoint& p) {
        const double bp = v.scalar(p);
        const Eigen::Vector3d vp = project_tangent(p, v.vector(p));
        double out = 0.0;
        for (const auto& a : rho.atoms()) {
            const auto& y = a.point;
            const Eigen::Vector3d vy = project_tangent(y, v.vector(y));
            const double c = sphere_cos(p, y);
            const double dc = vp.dot(y.vec()) + p.vec().dot(vy);
            const auto plus = lag.slope_in_cos(c, dc, Side::plus);
            const auto minus = lag.slope_in_cos(c, dc, Side::minus);
            if (std::abs(plus.slope - minus.slope) > 1e-9 * (1.0 + std::abs(plus.slope))) {
                throw LinearizationError("lin_pairing: joint flow derivative of L does not exist (one-sided values " +
                                         std::to_string(plus.slope) + " and " + std::to_string(minus.slope) + ")");
            }
            out += a.weight * ((bp + v.scalar(y)) * lag(p, y) + plus.slope);
        }
        return out - 0.5 * nu * bp;
    };
    const SpherePoint& x = rho.point(atom);
    const Eigen::Vector3d ux = project_tangent(x, u.vector[atom]);
    double directional = 0.0;
    if (ux.norm() > 0.0) {
        constexpr double h = 1e-4;
        const double d1 = (g(advance(x, ux, h)) - g(advance(x, ux, -h))) / (2.0 * h);
        const double d2 = (g(advance(x, ux, h / 2)) - g(advance(x, ux, -h / 2))) / h;
        directional = (4.0 * d2 - d1) / 3.0;
    }
    return nabla_jet(u.scalar[atom], g(x), directional);
}

}  // namespace cvp
