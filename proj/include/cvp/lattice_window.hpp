#pragma once

// Finite truncation of the lattice measure sum_{x in Z^2} delta_{(x, 0)}:
// times t0 .. t0+T-1, spatial sites 0 .. W-1 with periodic identification.

#include "cvp/geometry.hpp"
#include "cvp/lagrangians.hpp"
#include "cvp/measures.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace cvp {

class LatticeWindow {
public:
    static constexpr int kMinWidth = 8;

    LatticeWindow(int time_extent, int width, int t0 = 0);

    int t0() const { return t0_; }
    int time_extent() const { return T_; }
    int width() const { return W_; }
    int t_end() const { return t0_ + T_; }  // one past the last slice
    std::size_t size() const { return static_cast<std::size_t>(T_) * static_cast<std::size_t>(W_); }

    bool contains_time(int t) const { return t >= t0_ && t < t_end(); }

    /// Atoms whose full interaction neighbourhood (max-norm distance 2) lies in the window.
    bool is_interior_time(int t) const { return t - t0_ >= 2 && t_end() - 1 - t >= 2; }
    bool is_interior(std::size_t atom) const { return is_interior_time(time_of(atom)); }

    std::size_t index(int t, int s) const;
    int time_of(std::size_t atom) const { return t0_ + static_cast<int>(atom / static_cast<std::size_t>(W_)); }
    int site_of(std::size_t atom) const { return static_cast<int>(atom % static_cast<std::size_t>(W_)); }
    int wrap_site(int s) const { return ((s % W_) + W_) % W_; }

    LatticePoint point(std::size_t atom) const { return {double(time_of(atom)), double(site_of(atom)), 0.0}; }

    /// Canonical measure: unit weight at every (t, s, 0).
    DiscreteMeasure<LatticePoint> measure() const;

    /// Lagrangian with this window's spatial period.
    LatticeLagrangian lagrangian(const LatticeParams& params) const {
        return LatticeLagrangian(params, static_cast<double>(W_));
    }

    /// Atoms at lattice max-norm distance <= 1 (all pairs with possibly non-zero L), including `atom`.
    std::vector<std::size_t> neighbours(std::size_t atom) const;

    std::vector<std::size_t> interior_atoms() const;

private:
    int T_;
    int W_;
    int t0_;
};

}  // namespace cvp
