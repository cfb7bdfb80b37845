#include "cvp/geometry.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cvp;
using cvp::testing::random_sphere_point;

TEST_CASE("minkowski interval") {
    CHECK(minkowski_interval(1.0, 0.0) == 1.0);
    CHECK(minkowski_interval(0.0, 1.0) == -1.0);
    CHECK(minkowski_interval(std::array<double, 2>{3.0, 2.0}) == 5.0);
}

TEST_CASE("wrap_angle uses the half-open interval") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(-kPi).epsilon(1e-15));
    CHECK(wrap_angle(-kPi) == -kPi);
    CHECK(wrap_angle(kPi) == -kPi);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);

    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        const double phi = cvp::testing::uniform(rng, -50.0, 50.0);
        const double w = wrap_angle(phi);
        CHECK(w >= -kPi);
        CHECK(w < kPi);
        CHECK(wrap_angle(w) == w);
        const double turns = (phi - w) / (2.0 * kPi);
        CHECK(std::abs(turns - std::round(turns)) < 1e-12);
    }
}

TEST_CASE("lattice points store wrapped phi") {
    const LatticePoint x(1.0, 2.0, 3.0 * kPi);
    CHECK(x.phi() == doctest::Approx(-kPi));
    const auto y = advance(LatticePoint(0.0, 0.0, 3.0), LatticeTangent{1.0, -1.0, 1.0}, 1.0);
    CHECK(y.t() == 1.0);
    CHECK(y.s() == -1.0);
    CHECK(y.phi() == doctest::Approx(4.0 - 2.0 * kPi));
}

TEST_CASE("sphere angle") {
    const SpherePoint e1(1, 0, 0), e2(0, 1, 0), m1(-1, 0, 0);
    CHECK(sphere_angle(e1, e1) == 0.0);
    CHECK(sphere_angle(e1, e2) == doctest::Approx(kPi / 2));
    CHECK(sphere_angle(e1, m1) == doctest::Approx(kPi));

    std::mt19937_64 rng(2);
    for (int k = 0; k < 1000; ++k) {
        const auto x = random_sphere_point(rng);
        const auto y = random_sphere_point(rng);
        CHECK(sphere_angle(x, y) == sphere_angle(y, x));
        CHECK(std::abs(x.vec().norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("sphere point constructor normalizes and rejects zero") {
    const SpherePoint p(3.0, 4.0, 0.0);
    CHECK(std::abs(p.vec().norm() - 1.0) <= 1e-12);
    CHECK_THROWS_AS(SpherePoint(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("rotation about an axis") {
    const SpherePoint e1(1, 0, 0);
    const Eigen::Vector3d e3(0, 0, 1);
    const auto r0 = rotate_about_axis(e1, e3, 0.0);
    CHECK((r0.vec() - e1.vec()).norm() == 0.0);
    const auto q = rotate_about_axis(e1, e3, kPi / 2);
    CHECK((q.vec() - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);

    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
        const auto x = random_sphere_point(rng);
        const auto y = random_sphere_point(rng);
        const Eigen::Vector3d a = random_sphere_point(rng).vec();
        const double t1 = cvp::testing::uniform(rng, -4.0, 4.0);
        const double t2 = cvp::testing::uniform(rng, -4.0, 4.0);
        const auto rx = rotate_about_axis(x, a, t1);
        const auto ry = rotate_about_axis(y, a, t1);
        CHECK(std::abs(sphere_angle(rx, ry) - sphere_angle(x, y)) <= 1e-12);
        CHECK(std::abs(rx.vec().norm() - 1.0) <= 1e-12);
        const auto composed = rotate_about_axis(rotate_about_axis(x, a, t2), a, t1);
        const auto direct = rotate_about_axis(x, a, t1 + t2);
        CHECK((composed.vec() - direct.vec()).norm() <= 1e-12);
    }
}

TEST_CASE("exponential map stays on the sphere and follows great circles") {
    const SpherePoint e1(1, 0, 0);
    const auto p = advance(e1, Eigen::Vector3d(0, 2, 0), kPi / 4);
    CHECK((p.vec() - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
    const auto same = advance(e1, Eigen::Vector3d(5, 0, 0), 1.0);
    CHECK((same.vec() - e1.vec()).norm() == 0.0);

    std::mt19937_64 rng(4);
    for (int k = 0; k < 200; ++k) {
        const auto x = random_sphere_point(rng);
        const auto v = cvp::testing::random_tangent(x, rng);
        const double tau = cvp::testing::uniform(rng, -2.0, 2.0);
        const auto y = advance(x, v, tau);
        CHECK(std::abs(y.vec().norm() - 1.0) <= 1e-12);
        const double expected = std::acos(std::cos(std::abs(tau) * v.norm()));
        CHECK(std::abs(sphere_angle(x, y) - expected) <= 1e-9);
    }
}

TEST_CASE("point coincidence") {
    CHECK(points_coincide(LatticePoint(1, 2, 0), LatticePoint(1, 2, 0)));
    CHECK_FALSE(points_coincide(LatticePoint(1, 2, 0), LatticePoint(1, 2, 1e-15)));
    CHECK(points_coincide(SpherePoint(1, 0, 0), SpherePoint(1, 1e-11, 0)));
    CHECK_FALSE(points_coincide(SpherePoint(1, 0, 0), SpherePoint(1, 1e-7, 0)));
}
