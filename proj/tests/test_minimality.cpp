#include "cvp/minimality.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <numbers>

using namespace cvp;
using cvp::testing::uniform;

namespace {

const LatticeParams kParams{};
constexpr double kNu = 18.0;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

VariationFunction random_interior_variation(const LatticeWindow& win, std::mt19937_64& rng, double sup) {
    std::vector<double> psi(win.size(), 0.0);
    const auto interior = win.interior_atoms();
    for (std::size_t i : interior) {
        psi[i] = uniform(rng, -1, 1);
    }
    const std::vector<double> w(win.size(), 1.0);
    auto projected = VariationFunction::project_on(psi, w, interior).values();
    double m = 0.0;
    for (double x : projected) {
        m = std::max(m, std::abs(x));
    }
    for (double& x : projected) {
        x *= sup / m;
    }
    return VariationFunction(projected, w);
}

// Smallest eigenvalue of the stencil on {sum psi = 0} by a dense solve of P K P
// with the constant direction shifted out of the way.
double dense_constrained_minimum(const LatticeWindow& win, double lambda_A, double lambda_I) {
    const auto n = static_cast<Eigen::Index>(win.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < win.size(); ++i) {
        const auto xi = win.point(i);
        for (std::size_t j = 0; j < win.size(); ++j) {
            const auto xj = win.point(j);
            if (xi.s() != xj.s()) {
                continue;
            }
            const int dt = std::abs(xi.t() - xj.t());
            K(i, j) = dt == 0 ? lambda_A : (dt == 1 ? lambda_I : 0.0);
        }
    }
    const Eigen::VectorXd e = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - e * e.transpose();
    const Eigen::MatrixXd M = P * K * P + 1e6 * e * e.transpose();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().minCoeff();
}

double cosine_oracle(int T, double lambda_A, double lambda_I) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= T; ++j) {
        best = std::min(best, lambda_A + 2.0 * lambda_I * std::cos(std::numbers::pi * j / (T + 1)));
    }
    return best;
}

}  // namespace

TEST_CASE("variation functions") {
    const std::vector<double> w{0.25, 0.25, 0.5};
    CHECK_THROWS_AS(VariationFunction({1.0, 0.0, 0.0}, w), std::invalid_argument);
    CHECK_THROWS_AS(VariationFunction({1.0, 1.0}, w), std::invalid_argument);
    CHECK_NOTHROW(VariationFunction({1.0, 1.0, -1.0}, w));
    const auto p = VariationFunction::project({1.0, 2.0, 3.0}, w);
    CHECK(std::abs(p[0] * w[0] + p[1] * w[1] + p[2] * w[2]) <= 1e-15);

    const std::vector<std::size_t> support{0, 2};
    const auto q = VariationFunction::project_on({1.0, 5.0, 3.0}, w, support);
    CHECK(q[1] == 0.0);
    CHECK(std::abs(q[0] * w[0] + q[2] * w[2]) <= 1e-15);
}

TEST_CASE("L_rho on the lattice") {
    const LatticeWindow win(10, 12);
    const auto lag = win.lagrangian(kParams);
    const auto rho = win.measure();
    const auto op = lattice_kernel(win, kParams.lambda_A, kParams.lambda_I);
    const std::vector<double> w(win.size(), 1.0);

    const VariationFunction zero(std::vector<double>(win.size(), 0.0), w);
    for (double v : apply_L_rho(zero, rho, lag)) {
        CHECK(v == 0.0);
    }

    // psi = delta_x - delta_y reproduces the stencil around x.
    const std::size_t x = win.index(4, 3);
    const std::size_t y = win.index(7, 9);
    std::vector<double> d(win.size(), 0.0);
    d[x] = 1.0;
    d[y] = -1.0;
    const VariationFunction delta(d, w);
    const auto resp = apply_L_rho(delta, op);
    CHECK(resp[x] == kParams.lambda_A);
    CHECK(resp[win.index(5, 3)] == kParams.lambda_I);
    CHECK(resp[win.index(3, 3)] == kParams.lambda_I);
    CHECK(resp[win.index(4, 4)] == 0.0);
    CHECK(resp[y] == -kParams.lambda_A);

    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> psi(win.size());
        for (auto& v : psi) {
            v = uniform(rng, -1, 1);
        }
        const auto pf = VariationFunction::project(psi, w);
        const auto general = apply_L_rho(pf, rho, lag);
        const auto stencil = apply_L_rho(pf, op);
        for (std::size_t i = 0; i < win.size(); ++i) {
            CHECK(std::abs(general[i] - stencil[i]) <= 1e-12);
        }
    }
    const auto brute = kernel_operator(rho, lag);
    CHECK((Eigen::MatrixXd(brute.kernel) - Eigen::MatrixXd(op.kernel)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quadratic form bound and symmetry") {
    const LatticeWindow win(32, 32);
    const auto op = lattice_kernel(win, kParams.lambda_A, kParams.lambda_I);
    const double gap = kParams.lambda_A - 2.0 * kParams.lambda_I;
    const std::vector<double> w(win.size(), 1.0);
    std::mt19937_64 rng(52);
    std::vector<double> psi(win.size());
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100000; ++trial) {
        for (auto& v : psi) {
            v = uniform(rng, -1, 1);
        }
        const Eigen::VectorXd p = to_eigen(VariationFunction::project(psi, w).values());
        worst = std::min(worst, op.form(p, p) / p.squaredNorm());
    }
    CHECK(worst >= gap);

    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd a(win.size()), b(win.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a[i] = uniform(rng, -1, 1);
            b[i] = uniform(rng, -1, 1);
        }
        CHECK(std::abs(op.form(a, b) - op.form(b, a)) <= 1e-12 * std::abs(op.form(a, b)) + 1e-12);
    }
}

TEST_CASE("smallest Rayleigh quotient") {
    SUBCASE("matches a dense solve on a small window") {
        const LatticeWindow win(8, 8);
        const auto op = lattice_kernel(win, kParams.lambda_A, kParams.lambda_I);
        const auto res = rayleigh_min(op);
        CHECK(res.converged);
        CHECK(std::abs(res.estimate - dense_constrained_minimum(win, 5.0, 2.0)) <= 1e-8);
        CHECK(std::abs(res.estimate - cosine_oracle(8, 5.0, 2.0)) <= 1e-8);
        CHECK(res.lower_bound <= res.estimate);
    }
    SUBCASE("32 x 32 window") {
        const LatticeWindow win(32, 32);
        const auto op = lattice_kernel(win, kParams.lambda_A, kParams.lambda_I);
        const auto res = rayleigh_min(op);
        CHECK(res.converged);
        CHECK(res.estimate >= 1.0 - 1e-8);
        CHECK(std::abs(res.estimate - cosine_oracle(32, 5.0, 2.0)) <= 1e-8);
        CHECK(std::abs(lattice_spectral_minimum(32, 5.0, 2.0) - cosine_oracle(32, 5.0, 2.0)) <= 1e-14);
        CHECK(res.lower_bound >= 1.0 - 1e-8);
    }
    SUBCASE("no time coupling") {
        const LatticeWindow win(16, 8);
        const auto res = rayleigh_min(lattice_kernel(win, kParams.lambda_A, 0.0));
        CHECK(std::abs(res.estimate - kParams.lambda_A) <= 1e-10);
    }
    SUBCASE("octahedron kernel") {
        const SphereLagrangian lag;
        const auto rho = octahedron_measure();
        const auto res = rayleigh_min(kernel_operator(rho, lag));
        CHECK(std::abs(res.estimate - 16.0 / 6.0) <= 1e-10);
    }
}

TEST_CASE("second variation on the lattice") {
    const LatticeWindow win(12, 12);
    const auto lag = win.lagrangian(kParams);
    const auto rho = win.measure();
    const auto op = lattice_kernel(win, kParams.lambda_A, kParams.lambda_I);
    std::mt19937_64 rng(53);

    const std::vector<double> w(win.size(), 1.0);
    const VariationFunction zero(std::vector<double>(win.size(), 0.0), w);
    CHECK(second_variation(zero, 0.7, win, lag, kNu) == 0.0);

    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_interior_variation(win, rng, 1.0);
        CHECK(second_variation(psi, 0.0, win, lag, kNu) == 0.0);
        const Eigen::VectorXd p = to_eigen(psi.values());
        const double quad = op.form(p, p);
        for (double tau : {0.01, 0.3, -0.8}) {
            const double sv = second_variation(psi, tau, win, lag, kNu);
            CHECK(std::abs(sv - tau * tau * quad) <= 1e-10 * tau * tau * quad);
            CHECK(sv >= 0.0);
            const double generic = second_variation(psi, tau, rho, lag, kNu);
            CHECK(std::abs(generic - sv) <= 1e-10 * std::max(1.0, sv));

            // Brute-force oracle: difference of total actions in long double.
            long double before = 0.0L;
            long double after = 0.0L;
            for (std::size_t i = 0; i < win.size(); ++i) {
                for (std::size_t j = 0; j < win.size(); ++j) {
                    const long double l = lag(rho.point(i), rho.point(j));
                    before += l;
                    after += l * (1.0L + tau * psi[i]) * (1.0L + tau * psi[j]);
                }
            }
            CHECK(std::abs(static_cast<double>(after - before) - sv) <= 1e-9 * std::max(1.0, sv));
        }
    }
    const auto psi = random_interior_variation(win, rng, 1.0);
    CHECK_THROWS_AS(second_variation(psi, 2.0, win, lag, kNu), std::invalid_argument);
    CHECK_THROWS_AS(second_variation(psi, 2.0, rho, lag, kNu), std::invalid_argument);
}

TEST_CASE("perturbations of the octahedron do not lower the action") {
    const SphereLagrangian lag;
    const auto rho = octahedron_measure();
    const auto w = weights_of(rho);
    std::mt19937_64 rng(54);
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> psi(rho.size());
    for (int trial = 0; trial < 100000; ++trial) {
        for (auto& v : psi) {
            v = uniform(rng, -1, 1);
        }
        auto p = VariationFunction::project(psi, w).values();
        double m = 0.0;
        for (double x : p) {
            m = std::max(m, std::abs(x));
        }
        const double scale = uniform(rng, 0.0, 0.1) / m;
        for (double& x : p) {
            x *= scale;
        }
        worst = std::min(worst, second_variation(VariationFunction(p, w), 1.0, rho, lag, 32.0 / 6.0));
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("certificate on the lattice") {
    const LatticeWindow win(16, 16);
    CertifyOptions opts;
    opts.probes.count = 3000;
    const auto cert = certify_local_min(win, kParams, kNu, opts);
    CHECK(cert.el_ok);
    CHECK(cert.strict_off_support_ok);
    CHECK(cert.lagrangian_bounded_ok);
    CHECK(cert.lagrangian_sup_analytic);
    CHECK(cert.spectral_applicable);
    CHECK(std::abs(cert.spectral_epsilon - (kParams.lambda_A - 2.0 * kParams.lambda_I)) <= 1e-12);
    REQUIRE(cert.analytic_epsilon.has_value());
    CHECK(cert.rayleigh.lower_bound >= cert.spectral_epsilon - 1e-8);
    CHECK(cert.verdict);

    LatticeParams flat = kParams;
    flat.delta = 0.0;
    const auto degenerate = certify_local_min(win, flat, kNu, opts);
    CHECK(degenerate.el_ok);
    CHECK_FALSE(degenerate.strict_off_support_ok);
    CHECK_FALSE(degenerate.verdict);
}

TEST_CASE("certificate on the octahedron") {
    const SphereLagrangian lag;
    CertifyOptions opts;
    opts.probes.count = 3000;
    const auto cert = certify_local_min(octahedron_measure(), lag, 32.0 / 6.0, opts);
    CHECK(cert.el_ok);
    CHECK(cert.strict_off_support_ok);
    CHECK(cert.lagrangian_bounded_ok);
    CHECK_FALSE(cert.spectral_applicable);
    CHECK_FALSE(cert.analytic_epsilon.has_value());
    CHECK(std::abs(cert.rayleigh.estimate - 16.0 / 6.0) <= 1e-10);
    CHECK_FALSE(cert.verdict);
}

TEST_CASE("octahedron recognizers") {
    const auto oct = octahedron_measure();
    CHECK(octahedron_angle_error(oct) <= 1e-15);
    CHECK(octahedron_alignment_error(oct) <= 1e-12);
    std::mt19937_64 rng(55);
    const Eigen::Vector3d axis = cvp::testing::random_sphere_point(rng).vec();
    const auto rotated = push_forward<SpherePoint>(
        oct, [&](const SpherePoint& x) { return rotate_about_axis(x, axis, 0.9); },
        [](const SpherePoint&) { return 1.0; });
    CHECK(octahedron_angle_error(rotated) <= 1e-12);
    CHECK(octahedron_alignment_error(rotated) <= 1e-7);

    std::vector<Atom<SpherePoint>> bent(oct.atoms().begin(), oct.atoms().end());
    bent[0].point = SpherePoint(1.0, 0.05, 0.0);
    const DiscreteMeasure<SpherePoint> off(bent);
    CHECK(octahedron_angle_error(off) > 1e-2);
    CHECK(octahedron_alignment_error(off) > 1e-2);
}

TEST_CASE("annealing") {
    const SphereLagrangian lag;
    const AnnealSchedule schedule;
    const auto start = std::chrono::steady_clock::now();
    const auto six = anneal_sphere(6, lag, schedule, 2024);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 60.0);
    CHECK(six.action <= 8.0 / 3.0 + 1e-3);
    CHECK(std::abs(six.action - action(six.measure, lag)) <= 1e-14);
    CHECK(six.measure.size() == 6u);
    CHECK(octahedron_alignment_error(six.measure) < 1e-2);
    CHECK(six.proposals == 1L * schedule.stages * schedule.proposals_per_stage);

    const auto again = anneal_sphere(6, lag, schedule, 2024);
    CHECK(again.action == six.action);

    const auto one = anneal_sphere(1, lag, schedule, 1);
    CHECK(std::abs(one.action - 16.0) <= 1e-12);

    std::mt19937_64 rng(56);
    const Eigen::Vector3d axis = cvp::testing::random_sphere_point(rng).vec();
    const auto rotated = push_forward<SpherePoint>(
        six.measure, [&](const SpherePoint& x) { return rotate_about_axis(x, axis, 1.3); },
        [](const SpherePoint&) { return 1.0; });
    CHECK(std::abs(action(rotated, lag) - six.action) <= 1e-10);
    CHECK_THROWS_AS(anneal_sphere(0, lag, schedule, 1), std::invalid_argument);
}
