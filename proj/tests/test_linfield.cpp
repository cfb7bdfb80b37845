#include "cvp/linfield.hpp"
#include "cvp/minimality.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvp;
using cvp::testing::uniform;

namespace {

const LatticeParams kParams{};
constexpr double kNu = 18.0;

LatticeJetState random_wave_cauchy(std::mt19937_64& rng, int W, double scale = 1.0) {
    std::vector<LatticeSlice> sl(2);
    for (auto& s : sl) {
        s.b.assign(W, 0.0);
        s.v_phi.resize(W);
        for (auto& x : s.v_phi) {
            x = uniform(rng, -scale, scale);
        }
    }
    return LatticeJetState(W, 0, sl);
}

}  // namespace

TEST_CASE("jet state invariants") {
    CHECK_THROWS_AS(LatticeJetState(4, 0, {}), std::invalid_argument);
    std::vector<LatticeSlice> bad{{std::vector<double>(8), std::vector<double>(8)},
                                  {std::vector<double>(7), std::vector<double>(8)}};
    CHECK_THROWS_AS(LatticeJetState(8, 0, bad), std::invalid_argument);
    const auto st = plane_wave_cauchy(16, 1, 3);
    CHECK(st.t_begin() == 3);
    CHECK(st.t_end() == 5);
    CHECK_THROWS_AS(st.slice(5), std::out_of_range);
    CHECK(st.v_phi(3, 17) == st.v_phi(3, 1));
}

TEST_CASE("characteristic roots") {
    const auto r = scalar_characteristic_roots(kParams);
    CHECK(std::abs(r.r_plus * r.r_minus - 1.0) <= 1e-12);
    CHECK(std::abs(r.r_plus + r.r_minus + kParams.lambda_A / kParams.lambda_I) <= 1e-12);
    CHECK(std::abs(r.r_minus) < 1.0);
    CHECK(std::abs(r.r_minus + 0.5) <= 1e-15);
    CHECK(std::abs(r.r_plus + 2.0) <= 1e-15);
    for (double root : {r.r_minus, r.r_plus}) {
        CHECK(std::abs(kParams.lambda_I * root * root + kParams.lambda_A * root + kParams.lambda_I) <= 1e-12);
    }
}

TEST_CASE("plane waves evolve exactly") {
    const int W = 64;
    auto st = lattice_evolve(plane_wave_cauchy(W, 3), kParams, 39);
    REQUIRE(st.has_time(40));
    for (int s = 0; s < W; ++s) {
        CHECK(std::abs(st.v_phi(40, s) - plane_wave_value(W, 3, 40, s)) <= 1e-10);
    }
    for (int m : {1, 3, 7, 31}) {
        const auto wave = lattice_evolve(plane_wave_cauchy(W, m, 0, 1.3, 0.4), kParams, 98);
        double worst = 0.0;
        for (int t = 1; t + 1 < wave.t_end(); ++t) {
            for (int s = 0; s < W; ++s) {
                const double res = wave.v_phi(t, s + 1) + wave.v_phi(t, s - 1) - wave.v_phi(t - 1, s) -
                                   wave.v_phi(t + 1, s);
                worst = std::max(worst, std::abs(res));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("decaying scalar mode") {
    const auto r = scalar_characteristic_roots(kParams);
    std::vector<double> profile(16);
    std::mt19937_64 rng(31);
    for (auto& p : profile) {
        p = uniform(rng, -1, 1);
    }
    const auto st = lattice_evolve(scalar_mode_cauchy(profile, r.r_minus, 0), kParams, 14);
    for (int t = 0; t < st.t_end(); ++t) {
        for (int s = 0; s < 16; ++s) {
            CHECK(std::abs(st.b(t, s) - std::pow(r.r_minus, t) * profile[s]) <= 1e-10);
        }
    }
    // The same mode run backwards grows like r_minus^t for negative t.
    const auto back = lattice_evolve(scalar_mode_cauchy(profile, r.r_minus, 0), kParams, 20, TimeDirection::backward);
    CHECK(back.t_begin() == -20);
    for (int s = 0; s < 16; ++s) {
        CHECK(std::abs(back.b(-20, s) - std::pow(r.r_minus, -20) * profile[s]) <= 1e-10 * std::pow(2.0, 20));
    }
}

TEST_CASE("zero data and the growth guard") {
    std::vector<LatticeSlice> zero(2, LatticeSlice{std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)});
    const auto st = lattice_evolve(LatticeJetState(8, 0, zero), kParams, 50);
    CHECK(st.max_abs() == 0.0);

    std::vector<double> ones(8, 1.0);
    const auto r = scalar_characteristic_roots(kParams);
    CHECK_THROWS_AS(lattice_evolve(scalar_mode_cauchy(ones, r.r_plus, 0), kParams, 60), GrowthError);
    CHECK_THROWS_AS(lattice_evolve(LatticeJetState(8, 0, {zero[0]}), kParams, 1), std::invalid_argument);
}

TEST_CASE("time reversal and superposition") {
    std::mt19937_64 rng(32);
    const int W = 32;
    const int n = 60;
    const auto x = random_wave_cauchy(rng, W);
    const auto fwd = lattice_evolve(x, kParams, n);
    const auto& sl = fwd.slices();
    const LatticeJetState reversed(W, 0, {sl[sl.size() - 1], sl[sl.size() - 2]});
    const auto ret = lattice_evolve(reversed, kParams, n);
    const auto& out = ret.slices();
    for (int s = 0; s < W; ++s) {
        CHECK(std::abs(out[out.size() - 1].v_phi[s] - x.slices()[0].v_phi[s]) <= 1e-9);
        CHECK(std::abs(out[out.size() - 2].v_phi[s] - x.slices()[1].v_phi[s]) <= 1e-9);
    }

    const auto y = random_wave_cauchy(rng, W);
    const double alpha = 0.7;
    const double beta = -1.9;
    const auto lhs = lattice_evolve(x.combine(alpha, y, beta), kParams, n);
    const auto rhs = lattice_evolve(x, kParams, n).combine(alpha, lattice_evolve(y, kParams, n), beta);
    CHECK(lhs.combine(1.0, rhs, -1.0).max_abs() <= 1e-10);
}

TEST_CASE("linearized residuals") {
    std::mt19937_64 rng(33);
    const int W = 32;
    const auto r = scalar_characteristic_roots(kParams);
    std::vector<double> profile(W);
    for (auto& p : profile) {
        p = uniform(rng, -1, 1);
    }
    const auto scalar = lattice_evolve(scalar_mode_cauchy(profile, r.r_minus, 0), kParams, 10);
    const auto rep_b = lin_residual(scalar, kParams, kNu);
    CHECK(rep_b.max_scalar_residual <= 1e-10);
    CHECK(rep_b.atoms_checked == 8u * W);

    const auto wave = lattice_evolve(random_wave_cauchy(rng, W), kParams, 30);
    const auto rep_w = lin_residual(wave, kParams, kNu);
    CHECK(rep_w.max_wave_residual <= 1e-10);
    CHECK(rep_w.max_scalar_residual == 0.0);

    std::vector<LatticeSlice> noise(12);
    for (auto& s : noise) {
        s.b.assign(W, 0.0);
        s.v_phi.resize(W);
        for (auto& x : s.v_phi) {
            x = uniform(rng, -1, 1);
        }
    }
    CHECK(lin_residual(LatticeJetState(W, 0, noise), kParams, kNu).max_wave_residual > 0.1);

    std::vector<LatticeSlice> constant(
        8, LatticeSlice{std::vector<double>(W, 0.0), std::vector<double>(W, 2.5)});
    const auto rep_c = lin_residual(LatticeJetState(W, 0, constant, {0.3, -1.2}), kParams, kNu);
    CHECK(rep_c.max_wave_residual == 0.0);
    CHECK(rep_c.max_scalar_residual == 0.0);
}

TEST_CASE("pairing with single-atom test jets") {
    std::mt19937_64 rng(34);
    const int W = 16;
    const auto wave = lattice_evolve(plane_wave_cauchy(W, 2), kParams, 10);
    const auto win = wave.window();
    const auto lag = win.lagrangian(kParams);
    const auto v = wave.to_jet();
    for (std::size_t i : win.interior_atoms()) {
        auto u = LatticeJet::zero(win.size());
        u.scalar[i] = uniform(rng, -1, 1);
        u.vector[i].phi = uniform(rng, -1, 1);
        CHECK(std::abs(lin_pairing(u, v, i, win, lag, kNu)) <= 1e-12);
    }
    auto bad_u = LatticeJet::zero(win.size());
    bad_u.vector[win.index(5, 3)].t = 1.0;
    CHECK_THROWS_AS(lin_pairing(bad_u, v, win.index(5, 3), win, lag, kNu), std::invalid_argument);

    // (t, s) components that differ between neighbours cannot be linearized.
    auto broken = v;
    broken.vector[win.index(5, 3)].t = 0.5;
    auto u = LatticeJet::zero(win.size());
    u.scalar[win.index(5, 3)] = 1.0;
    CHECK_THROWS_AS(lin_pairing(u, broken, win.index(5, 3), win, lag, kNu), LinearizationError);
}

TEST_CASE("rotation jets on the octahedron") {
    const Eigen::Vector3d e3(0, 0, 1);
    const DiscreteMeasure<SpherePoint> two({{SpherePoint(0, 0, 1), 0.5}, {SpherePoint(1, 0, 0), 0.5}});
    const auto j = sphere_rotation_jet(e3, two);
    CHECK(j.vector[0].norm() == 0.0);
    CHECK((j.vector[1] - Eigen::Vector3d(0, 1, 0)).norm() == 0.0);
    CHECK_THROWS_AS(sphere_rotation_jet(Eigen::Vector3d(0, 0, 2), two), std::invalid_argument);

    const SphereLagrangian lag;
    const auto rho = octahedron_measure();
    const double nu = 32.0 / 6.0;
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Vector3d axis = cvp::testing::random_sphere_point(rng).vec();
        const auto field = rotation_field(axis);
        const auto jet = sphere_rotation_jet(axis, rho);
        for (std::size_t x = 0; x < rho.size(); ++x) {
            CHECK((jet.vector[x] - field.vector(rho.point(x))).norm() <= 1e-15);
            for (std::size_t y = 0; y < rho.size(); ++y) {
                // d/dtau L(R_tau x, R_tau y) at tau = 0, analytically and by central differences.
                const double c = sphere_cos(rho.point(x), rho.point(y));
                const double dc = jet.vector[x].dot(rho.point(y).vec()) + rho.point(x).vec().dot(jet.vector[y]);
                CHECK(std::abs(lag.slope_in_cos(c, dc, Side::plus).value()) <= 1e-9);
                CHECK(std::abs(lag.slope_in_cos(c, dc, Side::minus).value()) <= 1e-9);
                const double h = 1e-5;
                const double fd = (lag(rotate_about_axis(rho.point(x), axis, h), rotate_about_axis(rho.point(y), axis, h)) -
                                   lag(rotate_about_axis(rho.point(x), axis, -h),
                                       rotate_about_axis(rho.point(y), axis, -h))) /
                                  (2 * h);
                CHECK(std::abs(fd) <= 1e-9);
            }
            auto u = SphereJet::zero(rho.size());
            u.scalar[x] = uniform(rng, -2, 2);
            u.vector[x] = cvp::testing::random_tangent(rho.point(x), rng);
            CHECK(std::abs(lin_pairing(u, field, x, rho, lag, nu)) <= 1e-8);
        }
    }
}

TEST_CASE("sphere pairing detects non-linearizable fields") {
    const SphereLagrangian lag;
    const auto rho = octahedron_measure();
    // A field pushing e1 toward e2 while e2 stays put: the pair (e1, e2) sits at the kink.
    SphereJetField push{[](const SpherePoint&) { return 0.0; },
                        [](const SpherePoint& p) {
                            return p.vec().x() > 0.5 ? Eigen::Vector3d(0, 1, 0) : Eigen::Vector3d::Zero();
                        }};
    auto u = SphereJet::zero(rho.size());
    u.scalar[0] = 1.0;
    CHECK_THROWS_AS(lin_pairing(u, push, 0, rho, lag, 32.0 / 6.0), LinearizationError);
}
