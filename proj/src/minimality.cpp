#include "cvp/minimality.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace cvp {

namespace {

double weighted_sum(std::span<const double> psi, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        acc += psi[i] * w[i];
    }
    return acc;
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

VariationFunction::VariationFunction(std::vector<double> psi, std::span<const double> weights) : psi_(std::move(psi)) {
    if (psi_.size() != weights.size()) {
        throw std::invalid_argument("variation: psi and weights differ in size");
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < psi_.size(); ++i) {
        scale += std::abs(psi_[i]) * weights[i];
    }
    const double mean = weighted_sum(psi_, weights);
    if (std::abs(mean) > 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("variation: sum psi w = " + std::to_string(mean) + " is not zero");
    }
}

VariationFunction VariationFunction::project(std::vector<double> psi, std::span<const double> weights) {
    std::vector<std::size_t> all(psi.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return project_on(std::move(psi), weights, all);
}

VariationFunction VariationFunction::project_on(std::vector<double> psi, std::span<const double> weights,
                                                std::span<const std::size_t> support) {
    if (psi.size() != weights.size()) {
        throw std::invalid_argument("variation: psi and weights differ in size");
    }
    if (support.empty()) {
        throw std::invalid_argument("variation: empty support");
    }
    std::vector<double> out(psi.size(), 0.0);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i : support) {
        out[i] = psi[i];
        num += psi[i] * weights[i];
        den += weights[i];
    }
    const double c = num / den;
    for (std::size_t i : support) {
        out[i] -= c;
    }
    VariationFunction v;
    v.psi_ = std::move(out);
    return v;
}

Eigen::VectorXd KernelOperator::apply(const Eigen::VectorXd& psi) const { return kernel * weights.cwiseProduct(psi); }

double KernelOperator::form(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi) const {
    return weights.cwiseProduct(phi).dot(apply(psi));
}

KernelOperator lattice_kernel(const LatticeWindow& window, double lambda_A, double lambda_I) {
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const int t = window.time_of(i);
        const int s = window.site_of(i);
        const auto row = static_cast<Eigen::Index>(i);
        if (lambda_A != 0.0) {
            entries.emplace_back(row, row, lambda_A);
        }
        if (lambda_I == 0.0) {
            continue;
        }
        for (int dt : {-1, 1}) {
            if (window.contains_time(t + dt)) {
                entries.emplace_back(row, static_cast<Eigen::Index>(window.index(t + dt, s)), lambda_I);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(window.size());
    KernelOperator op;
    op.kernel.resize(n, n);
    op.kernel.setFromTriplets(entries.begin(), entries.end());
    op.weights = Eigen::VectorXd::Ones(n);
    return op;
}

std::vector<double> apply_L_rho(const VariationFunction& psi, const KernelOperator& op) {
    const Eigen::VectorXd r = op.apply(as_eigen(psi.values()));
    return {r.data(), r.data() + r.size()};
}

// ---------------------------------------------------------------------------

RayleighResult rayleigh_min(const KernelOperator& op, const RayleighOptions& options) {
    const auto n = static_cast<Eigen::Index>(op.size());
    if (n < 2) {
        throw std::invalid_argument("rayleigh_min: the zero-mean subspace is trivial for fewer than two atoms");
    }
    if (options.iterations < 1) {
        throw std::invalid_argument("rayleigh_min: iterations must be positive");
    }
    // Symmetric form B = D K D with D = diag(sqrt w); phi = D psi turns the
    // w-inner product into the Euclidean one and the constraint into phi . e = 0.
    const Eigen::VectorXd d = op.weights.cwiseSqrt();
    const Eigen::VectorXd e = d.normalized();
    auto project = [&](Eigen::VectorXd& x) { x -= e * e.dot(x); };
    auto apply_B = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = d.cwiseProduct(op.kernel * d.cwiseProduct(x));
        project(y);
        return y;
    };

    double scale = 0.0;
    for (int k = 0; k < op.kernel.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.kernel, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value()) * d[it.row()] * d[it.col()]);
        }
    }
    if (scale == 0.0) {
        return {0.0, 0.0, 0.0, 0, true};
    }
    const double tol = options.tolerance * scale;
    const Eigen::Index block = std::min<Eigen::Index>(n - 1, 120);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        start[i] = g(rng);
    }
    project(start);
    start.normalize();

    RayleighResult res;
    while (true) {
        Eigen::MatrixXd Q(n, block + 1);
        std::vector<double> alpha;
        std::vector<double> beta;
        Q.col(0) = start;
        Eigen::Index m = 0;
        while (m < block && res.iterations < options.iterations) {
            Eigen::VectorXd z = apply_B(Q.col(m));
            const double a = Q.col(m).dot(z);
            alpha.push_back(a);
            ++m;
            ++res.iterations;
            for (int pass = 0; pass < 2; ++pass) {
                z -= Q.leftCols(m) * (Q.leftCols(m).transpose() * z);
                project(z);
            }
            const double b = z.norm();
            if (b <= 1e-10 * scale) {
                break;
            }
            beta.push_back(b);
            Q.col(m) = z / b;
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        Eigen::VectorXd y = Q.leftCols(m) * es.eigenvectors().col(0);
        project(y);
        y.normalize();
        const double rq = y.dot(apply_B(y));
        const double r = (apply_B(y) - rq * y).norm();
        res.estimate = rq;
        res.residual = r;
        res.lower_bound = res.estimate - r;
        if (r <= tol) {
            res.converged = true;
            return res;
        }
        if (res.iterations >= options.iterations) {
            return res;
        }
        start = y;
    }
}

double lattice_spectral_minimum(int time_extent, double lambda_A, double lambda_I) {
    if (time_extent < 1) {
        throw std::invalid_argument("lattice_spectral_minimum: time extent must be positive");
    }
    double best = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= time_extent; ++j) {
        best = std::min(best, lambda_A + 2.0 * lambda_I * std::cos(kPi * j / (time_extent + 1)));
    }
    return best;
}

// ---------------------------------------------------------------------------

double second_variation(const VariationFunction& psi, double tau, const LatticeWindow& window,
                        const LatticeLagrangian& lag, double nu) {
    if (psi.size() != window.size()) {
        throw std::invalid_argument("second_variation: psi does not match the window size");
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (!(1.0 + tau * psi[i] > 0.0)) {
            throw std::invalid_argument("second_variation: 1 + tau psi <= 0 at atom " + std::to_string(i));
        }
    }
    const auto& p = lag.params();
    const auto op = lattice_kernel(window, p.lambda_A, p.lambda_I);
    const Eigen::VectorXd mu = tau * as_eigen(psi.values());
    const double linear = reduce_rows(window.size(), [&](std::size_t i) {
        if (psi[i] == 0.0) {
            return 0.0;
        }
        return (lattice_ell(window.point(i), window, lag, nu) + 0.5 * nu) * mu[static_cast<Eigen::Index>(i)];
    });
    return 2.0 * linear + op.form(mu, mu);
}

// ---------------------------------------------------------------------------

MinimalityCertificate certify_local_min(const LatticeWindow& window, const LatticeParams& params, double nu,
                                        const CertifyOptions& options) {
    const auto lag = window.lagrangian(params);
    MinimalityCertificate c;
    c.tolerance = options.tolerance;
    c.el = el_check(window, lag, nu, options.probes);
    c.el_ok = c.el.sup_ell_on_support <= options.tolerance;
    c.strict_off_support_ok = c.el.min_ell_on_probes > options.tolerance;
    c.lagrangian_sup = lag.upper_bound();
    c.lagrangian_sup_analytic = true;
    c.lagrangian_bounded_ok = std::isfinite(c.lagrangian_sup);
    c.analytic_epsilon = params.lambda_A - 2.0 * params.lambda_I;
    c.rayleigh = rayleigh_min(lattice_kernel(window, params.lambda_A, params.lambda_I), options.rayleigh);
    c.spectral_epsilon = *c.analytic_epsilon;
    if (c.rayleigh.converged) {
        c.spectral_epsilon = std::min(c.spectral_epsilon, c.rayleigh.lower_bound);
    }
    c.spectral_applicable = true;
    c.verdict = c.el_ok && c.strict_off_support_ok && c.lagrangian_bounded_ok && c.spectral_epsilon > 0.0;
    return c;
}

MinimalityCertificate certify_local_min(const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag,
                                        double nu, const CertifyOptions& options) {
    MinimalityCertificate c;
    c.tolerance = options.tolerance;
    c.el = el_check(rho, lag, nu, options.probes);
    c.el_ok = c.el.sup_ell_on_support <= options.tolerance;
    c.strict_off_support_ok = c.el.min_ell_on_probes > options.tolerance;

    const auto probes = sphere_probes(rho, options.probes);
    double sup = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        sup = std::max(sup, lag(probes[i], probes[(i + 1) % probes.size()]));
        for (const auto& a : rho.atoms()) {
            sup = std::max(sup, lag(probes[i], a.point));
        }
    }
    c.lagrangian_sup = sup;
    c.lagrangian_sup_analytic = false;
    c.lagrangian_bounded_ok = std::isfinite(sup) && sup <= lag.upper_bound() + options.tolerance;

    c.rayleigh = rayleigh_min(kernel_operator(rho, lag), options.rayleigh);
    c.spectral_epsilon = c.rayleigh.lower_bound;
    c.spectral_applicable = false;
    c.verdict = false;
    return c;
}

// ---------------------------------------------------------------------------

AnnealResult anneal_sphere(int n_points, const SphereLagrangian& lag, const AnnealSchedule& schedule,
                           std::uint64_t seed) {
    if (n_points < 1) {
        throw std::invalid_argument("anneal_sphere: need at least one point");
    }
    if (!(schedule.cooling > 0.0 && schedule.cooling < 1.0) || schedule.stages < 1 ||
        schedule.proposals_per_stage < 1 || !(schedule.step_start > 0.0) || !(schedule.step_end > 0.0) ||
        !(schedule.initial_temperature > 0.0)) {
        throw std::invalid_argument("anneal_sphere: invalid schedule");
    }
    const auto n = static_cast<std::size_t>(n_points);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    auto gaussian3 = [&] { return Eigen::Vector3d(g(rng), g(rng), g(rng)); };
    std::vector<SpherePoint> pts;
    while (pts.size() < n) {
        const Eigen::Vector3d v = gaussian3();
        if (v.norm() > 1e-6) {
            pts.emplace_back(v);
        }
    }
    // Off-diagonal pair sum; the diagonal contributes n L(x, x) regardless of the configuration.
    auto row = [&](std::size_t k, const SpherePoint& p) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) {
                acc += lag(p, pts[j]);
            }
        }
        return acc;
    };
    double off = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        off += row(k, pts[k]);
    }
    auto best = pts;
    double best_off = off;

    AnnealResult res;
    const double step_ratio =
        schedule.stages > 1 ? std::pow(schedule.step_end / schedule.step_start, 1.0 / (schedule.stages - 1)) : 1.0;
    double temperature = schedule.initial_temperature;
    double step = schedule.step_start;
    const double norm = 1.0 / (double(n) * double(n));
    for (int stage = 0; stage < schedule.stages; ++stage) {
        for (int k = 0; k < schedule.proposals_per_stage; ++k) {
            const std::size_t i = pick(rng);
            const SpherePoint cand = advance(pts[i], project_tangent(pts[i], gaussian3()), step);
            const double delta = 2.0 * (row(i, cand) - row(i, pts[i]));
            ++res.proposals;
            if (delta <= 0.0 || u01(rng) < std::exp(-delta * norm / temperature)) {
                pts[i] = cand;
                off += delta;
                ++res.accepted;
                if (off < best_off) {
                    best_off = off;
                    best = pts;
                }
            }
        }
        temperature *= schedule.cooling;
        step *= step_ratio;
    }
    std::vector<Atom<SpherePoint>> atoms;
    for (const auto& p : best) {
        atoms.push_back({p, 1.0 / double(n)});
    }
    res.measure = DiscreteMeasure<SpherePoint>::merged(atoms);
    res.action = action(res.measure, lag);
    return res;
}

DiscreteMeasure<SpherePoint> octahedron_measure() {
    std::vector<Atom<SpherePoint>> atoms;
    for (int axis = 0; axis < 3; ++axis) {
        for (double sign : {1.0, -1.0}) {
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            v[axis] = sign;
            atoms.push_back({SpherePoint(v), 1.0 / 6.0});
        }
    }
    return DiscreteMeasure<SpherePoint>(atoms);
}

double octahedron_angle_error(const DiscreteMeasure<SpherePoint>& rho) {
    if (rho.size() != 6) {
        throw std::invalid_argument("octahedron_angle_error: need six points, got " + std::to_string(rho.size()));
    }
    std::vector<double> angles;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            angles.push_back(sphere_angle(rho.point(i), rho.point(j)));
        }
    }
    std::sort(angles.begin(), angles.end());
    double err = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double target = k < 12 ? kPi / 2.0 : kPi;
        err = std::max(err, std::abs(angles[k] - target));
    }
    return err;
}

double octahedron_alignment_error(const DiscreteMeasure<SpherePoint>& rho) {
    if (rho.size() != 6) {
        throw std::invalid_argument("octahedron_alignment_error: need six points, got " + std::to_string(rho.size()));
    }
    const auto oct = octahedron_measure();
    std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
    double best_sq = std::numeric_limits<double>::infinity();
    double best_max = 0.0;
    do {
        Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
        for (int i = 0; i < 6; ++i) {
            H += rho.point(i).vec() * oct.point(perm[i]).vec().transpose();
        }
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Matrix3d S = Eigen::Matrix3d::Identity();
        S(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
        const Eigen::Matrix3d R = svd.matrixV() * S * svd.matrixU().transpose();
        double sq = 0.0;
        double mx = 0.0;
        for (int i = 0; i < 6; ++i) {
            const SpherePoint rotated(R * rho.point(i).vec());
            sq += (rotated.vec() - oct.point(perm[i]).vec()).squaredNorm();
            mx = std::max(mx, sphere_angle(rotated, oct.point(perm[i])));
        }
        if (sq < best_sq) {
            best_sq = sq;
            best_max = mx;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_max;
}

}  // namespace cvp
