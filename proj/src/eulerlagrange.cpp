#include "cvp/eulerlagrange.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cvp {

double lattice_ell(const LatticePoint& x, const LatticeWindow& window, const LatticeLagrangian& lag, double nu) {
    const int t_lo = static_cast<int>(std::floor(x.t())) - 1;
    const int s_lo = static_cast<int>(std::floor(x.s())) - 1;
    double out = 0.0;
    for (int t = t_lo; t <= t_lo + 3; ++t) {
        if (!window.contains_time(t)) {
            continue;
        }
        for (int s = s_lo; s <= s_lo + 3; ++s) {
            out += lag(x, LatticePoint(t, window.wrap_site(s), 0.0));
        }
    }
    return out - 0.5 * nu;
}

namespace {

double open_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = 0.0;
    do {
        r = u(rng);
    } while (r == 0.0);
    return r;
}

}  // namespace

std::vector<LatticeProbeFamily> lattice_probes(const LatticeWindow& window, const ProbeSpec& spec) {
    const auto interior = window.interior_atoms();
    if (interior.empty()) {
        throw std::invalid_argument("lattice probes: window has no valid-interior atoms (need T >= 5)");
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    auto base = [&] { return window.point(interior[pick(rng)]); };

    std::vector<LatticeProbeFamily> out(3);
    out[0].name = "off_lattice_flat";
    out[1].name = "off_lattice";
    out[2].name = "lattice_twisted";
    for (auto& fam : out) {
        fam.points.reserve(spec.count);
    }
    for (std::size_t k = 0; k < spec.count; ++k) {
        const auto b = base();
        out[0].points.emplace_back(b.t() + open_unit(rng), b.s() + open_unit(rng), 0.0);
    }
    for (std::size_t k = 0; k < spec.count; ++k) {
        const auto b = base();
        const double dt = open_unit(rng);
        const double ds = open_unit(rng);
        out[1].points.emplace_back(b.t() + dt, b.s() + ds, angle(rng));
    }
    for (std::size_t k = 0; k < spec.count; ++k) {
        const auto b = base();
        double phi = 0.0;
        do {
            phi = angle(rng);
        } while (std::abs(phi) < spec.phi_min);
        out[2].points.emplace_back(b.t(), b.s(), phi);
    }
    return out;
}

std::vector<SpherePoint> sphere_probes(const DiscreteMeasure<SpherePoint>& rho, const ProbeSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<SpherePoint> out;
    out.reserve(spec.count);
    while (out.size() < spec.count) {
        const Eigen::Vector3d v(g(rng), g(rng), g(rng));
        if (v.norm() < 1e-8) {
            continue;
        }
        SpherePoint p(v);
        if (rho.find(p) >= 0) {
            continue;
        }
        out.push_back(p);
    }
    return out;
}

double calibrate_nu(const LatticeWindow& window, const LatticeLagrangian& lag, const ProbeSpec& spec) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : window.interior_atoms()) {
        best = std::min(best, lattice_ell(window.point(i), window, lag, 0.0));
    }
    for (const auto& fam : lattice_probes(window, spec)) {
        for (const auto& x : fam.points) {
            best = std::min(best, lattice_ell(x, window, lag, 0.0));
        }
    }
    return 2.0 * best;
}

ElReport el_check(const LatticeWindow& window, const LatticeLagrangian& lag, double nu, const ProbeSpec& spec) {
    ElReport rep;
    rep.nu_used = nu;
    rep.seed = spec.seed;
    for (std::size_t i : window.interior_atoms()) {
        rep.sup_ell_on_support = std::max(rep.sup_ell_on_support, std::abs(lattice_ell(window.point(i), window, lag, nu)));
        ++rep.atoms_checked;
    }
    rep.min_ell_on_probes = std::numeric_limits<double>::infinity();
    for (const auto& fam : lattice_probes(window, spec)) {
        ProbeFamilyStats st;
        st.name = fam.name;
        st.count = fam.points.size();
        st.min_ell = std::numeric_limits<double>::infinity();
        st.max_ell = -std::numeric_limits<double>::infinity();
        for (const auto& x : fam.points) {
            const double e = lattice_ell(x, window, lag, nu);
            st.min_ell = std::min(st.min_ell, e);
            st.max_ell = std::max(st.max_ell, e);
        }
        rep.min_ell_on_probes = std::min(rep.min_ell_on_probes, st.min_ell);
        rep.probe_count += st.count;
        rep.families.push_back(st);
    }
    return rep;
}

ElReport el_check(const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag, double nu,
                  const ProbeSpec& spec) {
    ElReport rep;
    rep.nu_used = nu;
    rep.seed = spec.seed;
    for (const auto& a : rho.atoms()) {
        rep.sup_ell_on_support = std::max(rep.sup_ell_on_support, std::abs(ell(a.point, rho, lag, nu)));
        ++rep.atoms_checked;
    }
    ProbeFamilyStats st;
    st.name = "uniform_sphere";
    st.min_ell = std::numeric_limits<double>::infinity();
    st.max_ell = -std::numeric_limits<double>::infinity();
    for (const auto& x : sphere_probes(rho, spec)) {
        const double e = ell(x, rho, lag, nu);
        st.min_ell = std::min(st.min_ell, e);
        st.max_ell = std::max(st.max_ell, e);
        ++st.count;
    }
    rep.min_ell_on_probes = st.min_ell;
    rep.probe_count = st.count;
    rep.families.push_back(st);
    return rep;
}

}  // namespace cvp
