#include "cvp/lagrangians.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvp {

void LatticeParams::validate() const {
    if (!(eps > 0.0 && eps < 0.25)) {
        throw std::invalid_argument("lattice: eps must lie in (0, 1/4), got " + std::to_string(eps));
    }
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("lattice: delta must be >= 0, got " + std::to_string(delta));
    }
    if (!(lambda_I >= 2.0)) {
        throw std::invalid_argument("lattice: lambda_I must be >= 2, got " + std::to_string(lambda_I));
    }
    if (!(lambda_A >= 2.0 * lambda_I + eps)) {
        throw std::invalid_argument("lattice: lambda_A must be >= 2 lambda_I + eps = " +
                                    std::to_string(2.0 * lambda_I + eps) + ", got " + std::to_string(lambda_A));
    }
}

LatticeLagrangian::LatticeLagrangian(LatticeParams params, double spatial_period)
    : params_(params), period_(spatial_period) {
    params_.validate();
    if (period_ < 0.0) {
        throw std::invalid_argument("lattice: spatial period must be >= 0");
    }
}

std::array<double, 2> LatticeLagrangian::displacement(const LatticePoint& x, const LatticePoint& y) const {
    double ds = x.s() - y.s();
    if (period_ > 0.0) {
        ds -= period_ * std::floor(ds / period_ + 0.5);
    }
    return {x.t() - y.t(), ds};
}

namespace {

bool in_ball(double dt, double ds, double ct, double cs, double r) {
    const double a = dt - ct;
    const double b = ds - cs;
    return a * a + b * b < r * r;
}

// Sign of c0 + c1 tau + c2 tau^2 for all sufficiently small tau > 0.
bool eventually_positive(double c0, double c1, double c2) {
    if (c0 != 0.0) {
        return c0 > 0.0;
    }
    if (c1 != 0.0) {
        return c1 > 0.0;
    }
    return c2 > 0.0;
}

}  // namespace

double LatticeLagrangian::f(double dt, double ds) const {
    const double e = params_.eps;
    double out = 0.0;
    if (in_ball(dt, ds, 0.0, 1.0, e)) out += 1.0;
    if (in_ball(dt, ds, 0.0, -1.0, e)) out += 1.0;
    if (in_ball(dt, ds, 1.0, 0.0, e)) out -= 1.0;
    if (in_ball(dt, ds, -1.0, 0.0, e)) out -= 1.0;
    return out;
}

double LatticeLagrangian::on_difference(double dt, double ds, double dphi) const {
    if (std::max(std::abs(dt), std::abs(ds)) >= interaction_range()) {
        return 0.0;
    }
    const auto& p = params_;
    double out = 0.0;
    if (std::abs(dt) < 1.0 && std::abs(ds) < 1.0) {
        out += p.lambda_A;
    }
    if (minkowski_interval(dt, ds) > 0.0 && std::abs(dt) < 1.0 + p.eps) {
        out += p.lambda_I;
    }
    const double fv = f(dt, ds);
    const bool near_origin = in_ball(dt, ds, 0.0, 0.0, p.eps);
    if (fv != 0.0 || (near_origin && p.delta != 0.0)) {
        const double V = lattice_V(dphi);
        out += V * fv;
        if (near_origin) {
            out += p.delta * V * V;
        }
    }
    return out;
}

double LatticeLagrangian::operator()(const LatticePoint& x, const LatticePoint& y) const {
    const auto d = displacement(x, y);
    return on_difference(d[0], d[1], x.phi() - y.phi());
}

double LatticeLagrangian::upper_bound() const {
    return params_.lambda_A + params_.lambda_I + 2.0 + 4.0 * params_.delta;
}

SemiDerivative LatticeLagrangian::right_derivative(double dt, double ds, double dphi, const LatticeTangent& v) const {
    const auto& p = params_;
    // Membership of the difference (dt + tau v.t, ds + tau v.s) in each open set, just after tau = 0.
    auto box_after = [&] {
        const bool t_in = eventually_positive(1.0 - dt * dt, -2.0 * dt * v.t, -v.t * v.t);
        const bool s_in = eventually_positive(1.0 - ds * ds, -2.0 * ds * v.s, -v.s * v.s);
        return t_in && s_in;
    };
    auto cone_after = [&] {
        const bool timelike = eventually_positive(minkowski_interval(dt, ds), 2.0 * (dt * v.t - ds * v.s),
                                                  v.t * v.t - v.s * v.s);
        const double r = 1.0 + p.eps;
        const bool bounded = eventually_positive(r * r - dt * dt, -2.0 * dt * v.t, -v.t * v.t);
        return timelike && bounded;
    };
    auto ball_after = [&](double ct, double cs) {
        const double a = dt - ct;
        const double b = ds - cs;
        return eventually_positive(p.eps * p.eps - a * a - b * b, -2.0 * (a * v.t + b * v.s),
                                   -(v.t * v.t + v.s * v.s));
    };

    const double chiA = box_after() ? 1.0 : 0.0;
    const double chiI = cone_after() ? 1.0 : 0.0;
    const double f_after = (ball_after(0.0, 1.0) ? 1.0 : 0.0) + (ball_after(0.0, -1.0) ? 1.0 : 0.0) -
                           (ball_after(1.0, 0.0) ? 1.0 : 0.0) - (ball_after(-1.0, 0.0) ? 1.0 : 0.0);
    const double chiB = ball_after(0.0, 0.0) ? 1.0 : 0.0;

    const double V = lattice_V(dphi);
    const double dV = std::sin(dphi);
    const double after = p.lambda_A * chiA + p.lambda_I * chiI + V * f_after + p.delta * chiB * V * V;

    SemiDerivative out;
    out.jump = after - on_difference(dt, ds, dphi);
    out.slope = v.phi * (dV * f_after + 2.0 * p.delta * chiB * V * dV);
    return out;
}

SemiDerivative LatticeLagrangian::semi_derivative(const LatticePoint& x, const LatticePoint& y,
                                                  const LatticeTangent& v, Side side) const {
    const auto d = displacement(x, y);
    if (std::max(std::abs(d[0]), std::abs(d[1])) > interaction_range()) {
        return {};
    }
    const double dphi = wrap_angle(x.phi() - y.phi());
    if (side == Side::plus) {
        return right_derivative(d[0], d[1], dphi, v);
    }
    SemiDerivative r = right_derivative(d[0], d[1], dphi, -v);
    r.jump = -r.jump;
    r.slope = -r.slope;
    return r;
}

// ---------------------------------------------------------------------------

void SphereParams::validate() const {
    if (!(tau >= 1.0)) {
        throw std::invalid_argument("sphere: tau must be >= 1, got " + std::to_string(tau));
    }
}

SphereLagrangian::SphereLagrangian(SphereParams params) : params_(params) { params_.validate(); }

double SphereLagrangian::D_of_cos(double c) const {
    const double t2 = params_.tau * params_.tau;
    return 2.0 * t2 * (1.0 + c) * (2.0 - t2 * (1.0 - c));
}

double SphereLagrangian::dD_dcos(double c) const {
    const double t2 = params_.tau * params_.tau;
    return 4.0 * t2 * (1.0 + t2 * c);
}

double SphereLagrangian::operator()(const SpherePoint& x, const SpherePoint& y) const {
    return std::max(0.0, D_of_cos(sphere_cos(x, y)));
}

SemiDerivative SphereLagrangian::slope_in_cos(double c, double dc, Side side) const {
    SemiDerivative out;
    const double D = D_of_cos(c);
    const double rate = dD_dcos(c) * dc;
    if (D > kKinkTolerance) {
        out.slope = rate;
    } else if (D < -kKinkTolerance) {
        out.slope = 0.0;
    } else {
        out.slope = side == Side::plus ? std::max(0.0, rate) : std::min(0.0, rate);
    }
    return out;
}

SemiDerivative SphereLagrangian::semi_derivative(const SpherePoint& x, const SpherePoint& y,
                                                 const Eigen::Vector3d& v, Side side) const {
    const double dc = project_tangent(x, v).dot(y.vec());
    return slope_in_cos(sphere_cos(x, y), dc, side);
}

double SphereLagrangian::upper_bound() const {
    // D is quadratic in c; its maximum over [-1, 1] sits at an endpoint or the vertex.
    const double t2 = params_.tau * params_.tau;
    double best = std::max(D_of_cos(-1.0), D_of_cos(1.0));
    const double vertex = -1.0 / t2;
    if (vertex >= -1.0 && vertex <= 1.0) {
        best = std::max(best, D_of_cos(vertex));
    }
    return std::max(0.0, best);
}

// ---------------------------------------------------------------------------

void CfsParams::validate() const {
    if (n < 1) {
        throw std::invalid_argument("cfs: spin dimension n must be positive");
    }
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("cfs: kappa must be > 0");
    }
    if (!(c > 0.0)) {
        throw std::invalid_argument("cfs: local trace c must be > 0");
    }
}

CfsLagrangian::CfsLagrangian(CfsParams params) : params_(params) { params_.validate(); }

namespace {

void check_cfs_operator(const Eigen::MatrixXcd& m, const char* name) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string("cfs: ") + name + " must be square");
    }
    if (m.rows() > kCfsMaxDimension || m.rows() == 0) {
        throw std::invalid_argument(std::string("cfs: dimension of ") + name + " must be in [1, " +
                                    std::to_string(kCfsMaxDimension) + "], got " + std::to_string(m.rows()));
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) {
        throw std::invalid_argument(std::string("cfs: ") + name + " is not self-adjoint (deviation " +
                                    std::to_string(asym) + ")");
    }
}

}  // namespace

std::vector<std::complex<double>> cfs_nontrivial_eigenvalues(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                                                             int n) {
    check_cfs_operator(x, "x");
    check_cfs_operator(y, "y");
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("cfs: x and y must act on the same space");
    }
    const Eigen::MatrixXcd yh = 0.5 * (y + y.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ys(yh);
    const double scale = std::max(1.0, ys.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < ys.eigenvalues().size(); ++i) {
        if (std::abs(ys.eigenvalues()[i]) > 1e-12 * scale) {
            cols.push_back(i);
        }
    }
    const int rank = static_cast<int>(cols.size());
    if (rank > 2 * n) {
        throw std::invalid_argument("cfs: rank of y (" + std::to_string(rank) + ") exceeds 2n = " +
                                    std::to_string(2 * n));
    }

    std::vector<std::complex<double>> out;
    out.reserve(2 * n);
    if (rank > 0) {
        Eigen::MatrixXcd Q(x.rows(), rank);
        for (int k = 0; k < rank; ++k) {
            Q.col(k) = ys.eigenvectors().col(cols[k]);
        }
        // Non-zero spectra of (xQ)(Q*y) = xy and (Q*y)(xQ) coincide.
        const Eigen::MatrixXcd m = Q.adjoint() * yh * x * Q;
        if (rank == 1) {
            out.push_back(m(0, 0));
        } else if (rank == 2) {
            const std::complex<double> half_tr = 0.5 * (m(0, 0) + m(1, 1));
            const std::complex<double> det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            const std::complex<double> disc = std::sqrt(half_tr * half_tr - det);
            out.push_back(half_tr + disc);
            out.push_back(half_tr - disc);
        } else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                out.push_back(es.eigenvalues()[i]);
            }
        }
    }
    while (static_cast<int>(out.size()) < 2 * n) {
        out.emplace_back(0.0, 0.0);
    }
    return out;
}

Eigen::MatrixXcd cfs_random_operator(int dimension, int n, std::mt19937_64& rng) {
    if (dimension < 1 || dimension > kCfsMaxDimension || n < 1) {
        throw std::invalid_argument("cfs_random_operator: need 1 <= dimension <= " + std::to_string(kCfsMaxDimension) +
                                    " and n >= 1");
    }
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> modulus(0.2, 2.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dimension, dimension);
    for (int k = 0; k < 2 * n; ++k) {
        Eigen::VectorXcd v(dimension);
        for (int i = 0; i < dimension; ++i) {
            v[i] = {g(rng), g(rng)};
        }
        v.normalize();
        const double sign = k < n ? 1.0 : -1.0;
        m += sign * modulus(rng) * v * v.adjoint();
    }
    return 0.5 * (m + m.adjoint());
}

double cfs_lagrangian(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y, const CfsParams& params) {
    params.validate();
    const auto eig = cfs_nontrivial_eigenvalues(x, y, params.n);
    std::vector<double> mod(eig.size());
    for (std::size_t i = 0; i < eig.size(); ++i) {
        mod[i] = std::abs(eig[i]);
    }
    double spread = 0.0;
    double total = 0.0;
    for (double a : mod) {
        total += a;
        for (double b : mod) {
            spread += (a - b) * (a - b);
        }
    }
    return spread / (4.0 * params.n) + params.kappa * total * total;
}

}  // namespace cvp
