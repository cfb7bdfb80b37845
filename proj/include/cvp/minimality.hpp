#pragma once

// The operator (L_rho psi)(x) = sum_y L(x, y) psi(y) w(y) on zero-mean weight
// perturbations, its smallest Rayleigh quotient, second variations of the
// action, the sufficient local-minimality conditions, and sphere annealing.

#include "cvp/eulerlagrange.hpp"
#include "cvp/lagrangians.hpp"
#include "cvp/lattice_window.hpp"
#include "cvp/measures.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace cvp {

/// Weight perturbation psi with sum_x psi(x) w(x) = 0.
class VariationFunction {
public:
    /// Throws if |sum psi w| > 1e-12 max(1, sum |psi| w).
    VariationFunction(std::vector<double> psi, std::span<const double> weights);

    /// psi - (sum psi w / sum w), the w-orthogonal projection onto the constraint.
    static VariationFunction project(std::vector<double> psi, std::span<const double> weights);

    /// Projection restricted to `support`: entries outside it stay zero.
    static VariationFunction project_on(std::vector<double> psi, std::span<const double> weights,
                                        std::span<const std::size_t> support);

    const std::vector<double>& values() const { return psi_; }
    double operator[](std::size_t i) const { return psi_[i]; }
    std::size_t size() const { return psi_.size(); }

private:
    VariationFunction() = default;
    std::vector<double> psi_;
};

template <class P>
std::vector<double> weights_of(const DiscreteMeasure<P>& rho) {
    std::vector<double> w(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        w[i] = rho.weight(i);
    }
    return w;
}

/// Sparse kernel K(x, y) = L(x, y) together with the atom weights.
struct KernelOperator {
    Eigen::SparseMatrix<double> kernel;
    Eigen::VectorXd weights;

    std::size_t size() const { return static_cast<std::size_t>(weights.size()); }

    /// (L_rho psi)(x) = sum_y K(x, y) psi(y) w(y).
    Eigen::VectorXd apply(const Eigen::VectorXd& psi) const;

    /// <phi, L_rho psi> = sum_x w(x) phi(x) (L_rho psi)(x).
    double form(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi) const;
};

/// Brute-force kernel from every atom pair with L(x, y) != 0.
template <class P, PairLagrangian<P> L>
KernelOperator kernel_operator(const DiscreteMeasure<P>& rho, const L& lag) {
    const std::size_t n = rho.size();
    std::vector<Eigen::Triplet<double>> entries;
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        w[static_cast<Eigen::Index>(i)] = rho.weight(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = lag(rho.point(i), rho.point(j));
            if (v != 0.0) {
                entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v);
            }
        }
    }
    KernelOperator op;
    op.kernel.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    op.kernel.setFromTriplets(entries.begin(), entries.end());
    op.weights = std::move(w);
    return op;
}

/// Stencil lambda_A psi(x) + lambda_I (psi(x + e_t) + psi(x - e_t)) truncated to the window, unit weights.
/// Takes the two couplings directly so that degenerate values can be studied.
KernelOperator lattice_kernel(const LatticeWindow& window, double lambda_A, double lambda_I);

template <class P, PairLagrangian<P> L>
std::vector<double> apply_L_rho(const VariationFunction& psi, const DiscreteMeasure<P>& rho, const L& lag) {
    std::vector<double> out(rho.size(), 0.0);
    parallel_for(rho.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            acc += lag(rho.point(i), rho.point(j)) * psi[j] * rho.weight(j);
        }
        out[i] = acc;
    });
    return out;
}

std::vector<double> apply_L_rho(const VariationFunction& psi, const KernelOperator& op);

// ---------------------------------------------------------------------------
// Smallest Rayleigh quotient

struct RayleighResult {
    double estimate = 0.0;     // smallest Ritz value
    double residual = 0.0;     // || L_rho y - estimate y ||_w for the unit Ritz vector y
    double lower_bound = 0.0;  // estimate - residual
    int iterations = 0;
    bool converged = false;
};

struct RayleighOptions {
    int iterations = 500;
    std::uint64_t seed = 7;
    double tolerance = 1e-11;  // relative to max |K| w
};

/// Lanczos iteration with full reorthogonalization in the w-inner product,
/// projecting onto sum psi w = 0 after every operator application and
/// restarting from the current Ritz vector.
RayleighResult rayleigh_min(const KernelOperator& op, const RayleighOptions& options = {});

/// min_j lambda_A + 2 lambda_I cos(pi j / (T + 1)), j = 1..T: exact smallest
/// eigenvalue of the truncated stencil on zero-mean functions (W >= 2).
double lattice_spectral_minimum(int time_extent, double lambda_A, double lambda_I);

// ---------------------------------------------------------------------------
// Second variation

/// S((1 + tau psi) rho) - S(rho) through the two-term action difference.
/// Throws if 1 + tau psi(x) <= 0 at some atom.
template <class P, PairLagrangian<P> L>
double second_variation(const VariationFunction& psi, double tau, const DiscreteMeasure<P>& rho, const L& lag,
                        double nu) {
    if (psi.size() != rho.size()) {
        throw std::invalid_argument("second_variation: psi does not match the support size");
    }
    std::vector<double> w(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double f = 1.0 + tau * psi[i];
        if (!(f > 0.0)) {
            throw std::invalid_argument("second_variation: 1 + tau psi = " + std::to_string(f) + " <= 0 at atom " +
                                        std::to_string(i));
        }
        w[i] = f * rho.weight(i);
    }
    const auto rho_tilde = rho.reweighted(w);
    return action_difference<P>(rho, rho_tilde, lag, [&](const P& x) { return ell(x, rho, lag, nu); }, nu);
}

/// Lattice version: ell from the window-local sum and the sparse kernel for the quadratic term.
double second_variation(const VariationFunction& psi, double tau, const LatticeWindow& window,
                        const LatticeLagrangian& lag, double nu);

// ---------------------------------------------------------------------------
// Certificate

struct MinimalityCertificate {
    bool el_ok = false;
    bool strict_off_support_ok = false;
    bool lagrangian_bounded_ok = false;
    double spectral_epsilon = 0.0;
    bool spectral_applicable = true;
    bool verdict = false;

    ElReport el;
    double lagrangian_sup = 0.0;
    bool lagrangian_sup_analytic = false;
    RayleighResult rayleigh;
    std::optional<double> analytic_epsilon;
    double tolerance = 0.0;
};

struct CertifyOptions {
    ProbeSpec probes;
    RayleighOptions rayleigh;
    double tolerance = 1e-10;
};

/// Conditions on a lattice window: EL on valid-interior atoms, strictly positive
/// ell at the probes, the analytic bound on L, and the spectral gap with
/// epsilon = min(lambda_A - 2 lambda_I, numerical lower bound).
MinimalityCertificate certify_local_min(const LatticeWindow& window, const LatticeParams& params, double nu,
                                        const CertifyOptions& options = {});

/// Sphere: the spectral condition has no analytic epsilon; the Rayleigh minimum is
/// reported and the verdict stays false.
MinimalityCertificate certify_local_min(const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag,
                                        double nu, const CertifyOptions& options = {});

// ---------------------------------------------------------------------------
// Sphere annealing

struct AnnealSchedule {
    double initial_temperature = 0.5;
    double cooling = 0.95;
    int proposals_per_stage = 200;
    int stages = 300;
    double step_start = 0.5;
    double step_end = 1e-3;
};

struct AnnealResult {
    DiscreteMeasure<SpherePoint> measure;
    double action = 0.0;
    long accepted = 0;
    long proposals = 0;
};

/// Simulated annealing of n equal-weight points under the sphere Lagrangian.
AnnealResult anneal_sphere(int n_points, const SphereLagrangian& lag, const AnnealSchedule& schedule,
                           std::uint64_t seed);

/// Normalized counting measure on {+-e1, +-e2, +-e3}.
DiscreteMeasure<SpherePoint> octahedron_measure();

/// Largest |angle - target| after matching the sorted pairwise angles of six
/// points to twelve right angles and three straight angles.
double octahedron_angle_error(const DiscreteMeasure<SpherePoint>& rho);

/// Largest angle between a point and its image under the best rotation onto the
/// octahedron, over all vertex assignments.
double octahedron_alignment_error(const DiscreteMeasure<SpherePoint>& rho);

}  // namespace cvp
