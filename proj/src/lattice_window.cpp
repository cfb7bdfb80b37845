#include "cvp/lattice_window.hpp"

#include <stdexcept>
#include <string>

namespace cvp {

LatticeWindow::LatticeWindow(int time_extent, int width, int t0) : T_(time_extent), W_(width), t0_(t0) {
    if (T_ < 1) {
        throw std::invalid_argument("lattice window: time extent must be positive");
    }
    if (W_ < kMinWidth) {
        throw std::invalid_argument("lattice window: width must be >= " + std::to_string(kMinWidth) + ", got " +
                                    std::to_string(W_));
    }
}

std::size_t LatticeWindow::index(int t, int s) const {
    if (!contains_time(t)) {
        throw std::out_of_range("lattice window: time " + std::to_string(t) + " outside [" + std::to_string(t0_) +
                                ", " + std::to_string(t_end()) + ")");
    }
    return static_cast<std::size_t>(t - t0_) * static_cast<std::size_t>(W_) +
           static_cast<std::size_t>(wrap_site(s));
}

DiscreteMeasure<LatticePoint> LatticeWindow::measure() const {
    std::vector<Atom<LatticePoint>> atoms;
    atoms.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        atoms.push_back({point(i), 1.0});
    }
    // Lattice points are distinct by construction; skip the quadratic duplicate scan.
    return DiscreteMeasure<LatticePoint>::from_distinct(std::move(atoms));
}

std::vector<std::size_t> LatticeWindow::neighbours(std::size_t atom) const {
    std::vector<std::size_t> out;
    out.reserve(9);
    const int t = time_of(atom);
    const int s = site_of(atom);
    for (int dt = -1; dt <= 1; ++dt) {
        if (!contains_time(t + dt)) {
            continue;
        }
        for (int ds = -1; ds <= 1; ++ds) {
            out.push_back(index(t + dt, s + ds));
        }
    }
    return out;
}

std::vector<std::size_t> LatticeWindow::interior_atoms() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (is_interior(i)) {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace cvp
