#pragma once

// Finitely supported (weighted Dirac) measures on a configuration space,
// the causal action S(rho) = sum_x sum_y w(x) w(y) L(x, y), and the
// two-term formula for the action difference.

#include "cvp/geometry.hpp"
#include "cvp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvp {

template <class P>
struct Atom {
    P point;
    double weight = 0.0;
};

/// Anything that evaluates a pair interaction L(x, y) on points of type P.
template <class L, class P>
concept PairLagrangian = requires(const L& lag, const P& x, const P& y) {
    { lag(x, y) } -> std::convertible_to<double>;
};

/// A positive measure with finitely many atoms. Weights are strictly positive
/// and no two atoms share a point.
template <class P>
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;

    explicit DiscreteMeasure(std::vector<Atom<P>> atoms) : atoms_(std::move(atoms)) {
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!(atoms_[i].weight > 0.0) || !std::isfinite(atoms_[i].weight)) {
                throw std::invalid_argument("DiscreteMeasure: atom weight must be positive, got " +
                                            std::to_string(atoms_[i].weight));
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (points_coincide(atoms_[i].point, atoms_[j].point)) {
                    throw std::invalid_argument("DiscreteMeasure: duplicate atom at index " +
                                                std::to_string(i));
                }
            }
        }
    }

    /// Skips the duplicate scan; the caller guarantees distinct points. Weights are still checked.
    static DiscreteMeasure from_distinct(std::vector<Atom<P>> atoms) {
        for (const auto& a : atoms) {
            if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
                throw std::invalid_argument("DiscreteMeasure: atom weight must be positive");
            }
        }
        DiscreteMeasure m;
        m.atoms_ = std::move(atoms);
        return m;
    }

    /// Same points, new weights (all positive).
    DiscreteMeasure reweighted(const std::vector<double>& weights) const {
        if (weights.size() != atoms_.size()) {
            throw std::invalid_argument("DiscreteMeasure::reweighted: size mismatch");
        }
        auto atoms = atoms_;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            atoms[i].weight = weights[i];
        }
        return from_distinct(std::move(atoms));
    }

    /// Builds a measure by summing weights of coincident points. Zero-weight input is dropped.
    static DiscreteMeasure merged(const std::vector<Atom<P>>& raw) {
        std::vector<Atom<P>> out;
        for (const auto& a : raw) {
            if (a.weight < 0.0) {
                throw std::invalid_argument("DiscreteMeasure::merged: negative weight");
            }
            if (a.weight == 0.0) {
                continue;
            }
            bool found = false;
            for (auto& b : out) {
                if (points_coincide(a.point, b.point)) {
                    b.weight += a.weight;
                    found = true;
                    break;
                }
            }
            if (!found) {
                out.push_back(a);
            }
        }
        return DiscreteMeasure(std::move(out));
    }

    const std::vector<Atom<P>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const P& point(std::size_t i) const { return atoms_[i].point; }
    double weight(std::size_t i) const { return atoms_[i].weight; }

    double mass() const {
        std::vector<double> w(atoms_.size());
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            w[i] = atoms_[i].weight;
        }
        return pairwise_sum(w);
    }

    /// Index of the atom at x, or -1.
    long find(const P& x) const {
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (points_coincide(atoms_[i].point, x)) {
                return static_cast<long>(i);
            }
        }
        return -1;
    }

private:
    std::vector<Atom<P>> atoms_;
};

/// A finite signed measure; weights may have either sign.
template <class P>
class SignedMeasure {
public:
    SignedMeasure() = default;
    explicit SignedMeasure(std::vector<Atom<P>> atoms) : atoms_(std::move(atoms)) {}

    /// rho_tilde - rho with coincident atoms combined.
    static SignedMeasure difference(const DiscreteMeasure<P>& rho_tilde, const DiscreteMeasure<P>& rho) {
        std::vector<Atom<P>> out;
        auto add = [&out](const P& p, double w) {
            for (auto& b : out) {
                if (points_coincide(p, b.point)) {
                    b.weight += w;
                    return;
                }
            }
            out.push_back({p, w});
        };
        for (const auto& a : rho_tilde.atoms()) {
            add(a.point, a.weight);
        }
        for (const auto& a : rho.atoms()) {
            add(a.point, -a.weight);
        }
        return SignedMeasure(std::move(out));
    }

    const std::vector<Atom<P>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    double total() const {
        std::vector<double> w;
        w.reserve(atoms_.size());
        for (const auto& a : atoms_) {
            w.push_back(a.weight);
        }
        return pairwise_sum(w);
    }

    double total_variation() const {
        std::vector<double> w;
        w.reserve(atoms_.size());
        for (const auto& a : atoms_) {
            w.push_back(std::abs(a.weight));
        }
        return pairwise_sum(w);
    }

private:
    std::vector<Atom<P>> atoms_;
};

/// Positive and negative parts of a signed measure (mu = plus - minus, disjoint supports).
template <class P>
std::pair<DiscreteMeasure<P>, DiscreteMeasure<P>> jordan_decompose(const SignedMeasure<P>& mu) {
    std::vector<Atom<P>> plus;
    std::vector<Atom<P>> minus;
    for (const auto& a : mu.atoms()) {
        if (a.weight > 0.0) {
            plus.push_back(a);
        } else if (a.weight < 0.0) {
            minus.push_back({a.point, -a.weight});
        }
    }
    return {DiscreteMeasure<P>::merged(plus), DiscreteMeasure<P>::merged(minus)};
}

/// Causal action: double sum over all ordered atom pairs, diagonal included.
template <class P, PairLagrangian<P> L>
double action(const DiscreteMeasure<P>& rho, const L& lag) {
    const auto& atoms = rho.atoms();
    return reduce_rows(atoms.size(), [&](std::size_t i) {
        double row = 0.0;
        for (const auto& y : atoms) {
            row += y.weight * lag(atoms[i].point, y.point);
        }
        return atoms[i].weight * row;
    });
}

/// S(rho_tilde) - S(rho) via 2 * int (ell + nu/2) d mu + int int L d mu d mu with mu = rho_tilde - rho.
/// `ell_at` supplies ell at every point of supp mu. Requires mu(F) = 0.
template <class P, PairLagrangian<P> L>
double action_difference(const DiscreteMeasure<P>& rho, const DiscreteMeasure<P>& rho_tilde, const L& lag,
                         const std::function<double(const P&)>& ell_at, double nu) {
    const auto mu = SignedMeasure<P>::difference(rho_tilde, rho);
    const double scale = std::max({1.0, rho.mass(), rho_tilde.mass()});
    if (std::abs(mu.total()) > 1e-12 * scale) {
        throw std::invalid_argument("action_difference: volume constraint violated, (rho_tilde - rho)(F) = " +
                                    std::to_string(mu.total()));
    }
    const auto& atoms = mu.atoms();
    const double linear = reduce_rows(atoms.size(), [&](std::size_t i) {
        return (ell_at(atoms[i].point) + 0.5 * nu) * atoms[i].weight;
    });
    const double quadratic = reduce_rows(atoms.size(), [&](std::size_t i) {
        double row = 0.0;
        for (const auto& y : atoms) {
            row += y.weight * lag(atoms[i].point, y.point);
        }
        return atoms[i].weight * row;
    });
    return 2.0 * linear + quadratic;
}

/// F_*(f rho): atoms (F(x), f(x) w(x)) with coincident images merged.
template <class P>
DiscreteMeasure<P> push_forward(const DiscreteMeasure<P>& rho, const std::function<P(const P&)>& map,
                                const std::function<double(const P&)>& weight) {
    std::vector<Atom<P>> raw;
    raw.reserve(rho.size());
    for (const auto& a : rho.atoms()) {
        const double f = weight(a.point);
        if (!(f > 0.0)) {
            throw std::invalid_argument("push_forward: weight function must be positive on the support");
        }
        raw.push_back({map(a.point), f * a.weight});
    }
    return DiscreteMeasure<P>::merged(raw);
}

}  // namespace cvp
