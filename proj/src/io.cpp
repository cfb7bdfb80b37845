#include "cvp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace cvp {

namespace {

// JSON has no infinities; they are written as strings so that reports stay lossless.
Json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void require_model(const Json& j, const std::string& model) {
    if (!j.is_object() || !j.contains("model") || j.at("model") != model) {
        throw IoError("measure JSON: expected model \"" + model + "\"");
    }
    if (!j.contains("atoms") || !j.at("atoms").is_array()) {
        throw IoError("measure JSON: missing atoms array");
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

Json to_json(const LatticeParams& p) {
    return Json{{"lambda_A", p.lambda_A}, {"lambda_I", p.lambda_I}, {"eps", p.eps}, {"delta", p.delta}};
}

Json to_json(const SphereParams& p) { return Json{{"tau", p.tau}}; }

Json to_json(const CfsParams& p) { return Json{{"n", p.n}, {"kappa", p.kappa}, {"c", p.c}}; }

Json to_json(const DiscreteMeasure<LatticePoint>& rho) {
    Json atoms = Json::array();
    for (const auto& a : rho.atoms()) {
        atoms.push_back(Json{{"point", {a.point.t(), a.point.s(), a.point.phi()}}, {"weight", a.weight}});
    }
    return Json{{"model", "lattice"}, {"atoms", std::move(atoms)}};
}

Json to_json(const DiscreteMeasure<SpherePoint>& rho) {
    Json atoms = Json::array();
    for (const auto& a : rho.atoms()) {
        const auto& v = a.point.vec();
        atoms.push_back(Json{{"point", {v.x(), v.y(), v.z()}}, {"weight", a.weight}});
    }
    return Json{{"model", "sphere"}, {"atoms", std::move(atoms)}};
}

DiscreteMeasure<LatticePoint> lattice_measure_from_json(const Json& j) {
    require_model(j, "lattice");
    std::vector<Atom<LatticePoint>> atoms;
    for (const auto& a : j.at("atoms")) {
        const auto& p = a.at("point");
        if (p.size() != 3) {
            throw IoError("lattice atom: point needs [t, s, phi]");
        }
        atoms.push_back({LatticePoint(p[0].get<double>(), p[1].get<double>(), p[2].get<double>()),
                         a.at("weight").get<double>()});
    }
    return DiscreteMeasure<LatticePoint>(std::move(atoms));
}

DiscreteMeasure<SpherePoint> sphere_measure_from_json(const Json& j) {
    require_model(j, "sphere");
    std::vector<Atom<SpherePoint>> atoms;
    for (const auto& a : j.at("atoms")) {
        const auto& p = a.at("point");
        if (p.size() != 3) {
            throw IoError("sphere atom: point needs [x, y, z]");
        }
        atoms.push_back(
            {SpherePoint(p[0].get<double>(), p[1].get<double>(), p[2].get<double>()), a.at("weight").get<double>()});
    }
    return DiscreteMeasure<SpherePoint>(std::move(atoms));
}

Json to_json(const ElReport& r) {
    Json families = Json::array();
    for (const auto& f : r.families) {
        families.push_back(
            Json{{"name", f.name}, {"count", f.count}, {"min_ell", number(f.min_ell)}, {"max_ell", number(f.max_ell)}});
    }
    return Json{{"sup_ell_on_support", number(r.sup_ell_on_support)},
                {"min_ell_on_probes", number(r.min_ell_on_probes)},
                {"nu", r.nu_used},
                {"probe_count", r.probe_count},
                {"atoms_checked", r.atoms_checked},
                {"seed", r.seed},
                {"families", std::move(families)}};
}

Json to_json(const SigmaReport& r) {
    Json series = Json::array();
    for (const auto& [t, v] : r.values) {
        series.push_back(Json{{"t", t}, {"sigma", v}});
    }
    return Json{{"reference", r.reference}, {"max_deviation", r.max_deviation}, {"series", std::move(series)}};
}

Json to_json(const LatticeJetState& s) {
    Json slices = Json::array();
    for (const auto& sl : s.slices()) {
        slices.push_back(Json{{"b", sl.b}, {"v_phi", sl.v_phi}});
    }
    return Json{{"width", s.width()},
                {"t0", s.t_begin()},
                {"v_const", {s.v_const()[0], s.v_const()[1]}},
                {"slices", std::move(slices)}};
}

LatticeJetState lattice_state_from_json(const Json& j) {
    std::vector<LatticeSlice> slices;
    for (const auto& sl : j.at("slices")) {
        slices.push_back({sl.at("b").get<std::vector<double>>(), sl.at("v_phi").get<std::vector<double>>()});
    }
    const auto vc = j.at("v_const");
    return LatticeJetState(j.at("width").get<int>(), j.at("t0").get<int>(), std::move(slices),
                           {vc.at(0).get<double>(), vc.at(1).get<double>()});
}

Json to_json(const RayleighResult& r) {
    return Json{{"estimate", r.estimate},
                {"residual", r.residual},
                {"lower_bound", r.lower_bound},
                {"iterations", r.iterations},
                {"converged", r.converged}};
}

Json to_json(const MinimalityCertificate& c) {
    return Json{{"verdict", c.verdict},
                {"el_ok", c.el_ok},
                {"strict_off_support_ok", c.strict_off_support_ok},
                {"lagrangian_bounded_ok", c.lagrangian_bounded_ok},
                {"spectral_applicable", c.spectral_applicable},
                {"spectral_epsilon", c.spectral_epsilon},
                {"analytic_epsilon", c.analytic_epsilon ? Json(*c.analytic_epsilon) : Json(nullptr)},
                {"lagrangian_sup", c.lagrangian_sup},
                {"lagrangian_sup_analytic", c.lagrangian_sup_analytic},
                {"tolerance", c.tolerance},
                {"el", to_json(c.el)},
                {"rayleigh", to_json(c.rayleigh)}};
}

Json to_json(const AnnealResult& r) {
    return Json{{"action", r.action},
                {"accepted", r.accepted},
                {"proposals", r.proposals},
                {"measure", to_json(r.measure)}};
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

void write_sigma_csv(const std::filesystem::path& path, const SigmaReport& r) {
    auto out = open_for_write(path);
    out << "t,sigma\n";
    for (const auto& [t, v] : r.values) {
        out << t << ',' << format_double(v) << '\n';
    }
    finish(out, path);
}

void write_state_csv(const std::filesystem::path& path, const LatticeJetState& s) {
    auto out = open_for_write(path);
    out << "t,s,b,v_phi\n";
    for (int t = s.t_begin(); t < s.t_end(); ++t) {
        for (int x = 0; x < s.width(); ++x) {
            out << t << ',' << x << ',' << format_double(s.b(t, x)) << ',' << format_double(s.v_phi(t, x)) << '\n';
        }
    }
    finish(out, path);
}

void write_el_summary_csv(const std::filesystem::path& path, const ElReport& r) {
    auto out = open_for_write(path);
    out << "sup_ell_on_support,min_ell_on_probes,nu,probe_count,atoms_checked,seed\n";
    out << format_double(r.sup_ell_on_support) << ',' << format_double(r.min_ell_on_probes) << ','
        << format_double(r.nu_used) << ',' << r.probe_count << ',' << r.atoms_checked << ',' << r.seed << '\n';
    finish(out, path);
}

}  // namespace cvp
