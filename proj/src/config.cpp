#include "cvp/config.hpp"

#include "cvp/lattice_window.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace cvp {

namespace {

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
    if (!node.IsMap()) {
        throw ConfigError(where + ": expected a mapping");
    }
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
    const auto v = node[key];
    if (!v) {
        return;
    }
    try {
        out = v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + "." + key + ": cannot parse '" + YAML::Dump(v) + "'");
    }
}

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw ConfigError(msg);
    }
}

}  // namespace

std::string to_string(ModelKind m) {
    switch (m) {
        case ModelKind::lattice: return "lattice";
        case ModelKind::sphere: return "sphere";
        case ModelKind::cfs: return "cfs";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    try {
        switch (model) {
            case ModelKind::lattice: lattice.validate(); break;
            case ModelKind::sphere: sphere.validate(); break;
            case ModelKind::cfs: cfs.validate(); break;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    require(threads >= 1, "threads must be >= 1");
    require(window_T >= 3, "window.T must be >= 3");
    require(window_W >= LatticeWindow::kMinWidth, "window.W must be >= " + std::to_string(LatticeWindow::kMinWidth));
    require(probe_count >= 1, "probes.count must be >= 1");
    require(phi_min > 0.0 && phi_min < kPi, "probes.phi_min must lie in (0, pi)");
    require(tol.el > 0.0 && tol.dispersion > 0.0 && tol.conservation > 0.0 && tol.vanishing > 0.0 && tol.certificate > 0.0,
            "tolerances must be positive");
    require(evolve.steps >= 1, "evolve.steps must be >= 1");
    require(evolve.pairs >= 1, "evolve.pairs must be >= 1");
    require(evolve.support >= 1 && evolve.support <= window_W, "evolve.support must lie in [1, W]");
    require(vanishing_boxes >= 1, "vanishing.boxes must be >= 1");
    require(anneal_points >= 1, "anneal.points must be >= 1");
    require(anneal.initial_temperature > 0.0, "anneal.initial_temperature must be > 0");
    require(anneal.cooling > 0.0 && anneal.cooling <= 1.0, "anneal.cooling must lie in (0, 1]");
    require(anneal.proposals_per_stage >= 1 && anneal.stages >= 1, "anneal stages and proposals must be >= 1");
    require(anneal.step_start > 0.0 && anneal.step_end > 0.0, "anneal step sizes must be > 0");
    require(cfs_sampling.dimension >= 1 && cfs_sampling.dimension <= kCfsMaxDimension,
            "cfs.dimension must lie in [1, " + std::to_string(kCfsMaxDimension) + "]");
    require(cfs_sampling.samples >= 1, "cfs.samples must be >= 1");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed YAML: ") + e.what());
    }
    if (root.IsNull()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    reject_unknown(root, "config",
                   {"model", "seed", "threads", "lattice", "window", "probes", "tolerances", "evolve", "vanishing",
                    "sphere", "anneal", "cfs"});

    ExperimentConfig cfg;
    std::string model = "lattice";
    read(root, "model", model, "config");
    if (model == "lattice") {
        cfg.model = ModelKind::lattice;
    } else if (model == "sphere") {
        cfg.model = ModelKind::sphere;
    } else if (model == "cfs") {
        cfg.model = ModelKind::cfs;
    } else {
        throw ConfigError("config.model: expected lattice, sphere or cfs, got '" + model + "'");
    }
    read(root, "seed", cfg.seed, "config");
    read(root, "threads", cfg.threads, "config");

    if (const auto n = root["lattice"]) {
        reject_unknown(n, "lattice", {"lambda_A", "lambda_I", "eps", "delta"});
        read(n, "lambda_A", cfg.lattice.lambda_A, "lattice");
        read(n, "lambda_I", cfg.lattice.lambda_I, "lattice");
        read(n, "eps", cfg.lattice.eps, "lattice");
        read(n, "delta", cfg.lattice.delta, "lattice");
    }
    if (const auto n = root["window"]) {
        reject_unknown(n, "window", {"T", "W"});
        read(n, "T", cfg.window_T, "window");
        read(n, "W", cfg.window_W, "window");
    }
    if (const auto n = root["probes"]) {
        reject_unknown(n, "probes", {"count", "phi_min"});
        read(n, "count", cfg.probe_count, "probes");
        read(n, "phi_min", cfg.phi_min, "probes");
    }
    if (const auto n = root["tolerances"]) {
        reject_unknown(n, "tolerances", {"el", "dispersion", "conservation", "vanishing", "certificate"});
        read(n, "el", cfg.tol.el, "tolerances");
        read(n, "dispersion", cfg.tol.dispersion, "tolerances");
        read(n, "conservation", cfg.tol.conservation, "tolerances");
        read(n, "vanishing", cfg.tol.vanishing, "tolerances");
        read(n, "certificate", cfg.tol.certificate, "tolerances");
    }
    if (const auto n = root["evolve"]) {
        reject_unknown(n, "evolve", {"steps", "mode", "pairs", "support"});
        read(n, "steps", cfg.evolve.steps, "evolve");
        read(n, "mode", cfg.evolve.mode, "evolve");
        read(n, "pairs", cfg.evolve.pairs, "evolve");
        read(n, "support", cfg.evolve.support, "evolve");
    }
    if (const auto n = root["vanishing"]) {
        reject_unknown(n, "vanishing", {"boxes"});
        read(n, "boxes", cfg.vanishing_boxes, "vanishing");
    }
    if (const auto n = root["sphere"]) {
        reject_unknown(n, "sphere", {"tau"});
        read(n, "tau", cfg.sphere.tau, "sphere");
    }
    if (const auto n = root["anneal"]) {
        reject_unknown(n, "anneal",
                       {"points", "initial_temperature", "cooling", "proposals_per_stage", "stages", "step_start",
                        "step_end"});
        read(n, "points", cfg.anneal_points, "anneal");
        read(n, "initial_temperature", cfg.anneal.initial_temperature, "anneal");
        read(n, "cooling", cfg.anneal.cooling, "anneal");
        read(n, "proposals_per_stage", cfg.anneal.proposals_per_stage, "anneal");
        read(n, "stages", cfg.anneal.stages, "anneal");
        read(n, "step_start", cfg.anneal.step_start, "anneal");
        read(n, "step_end", cfg.anneal.step_end, "anneal");
    }
    if (const auto n = root["cfs"]) {
        reject_unknown(n, "cfs", {"n", "kappa", "c", "dimension", "samples"});
        read(n, "n", cfg.cfs.n, "cfs");
        read(n, "kappa", cfg.cfs.kappa, "cfs");
        read(n, "c", cfg.cfs.c, "cfs");
        read(n, "dimension", cfg.cfs_sampling.dimension, "cfs");
        read(n, "samples", cfg.cfs_sampling.samples, "cfs");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace cvp
