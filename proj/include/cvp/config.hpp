#pragma once
// Experiment configuration loaded from YAML.
//
//   model: lattice            # lattice | sphere | cfs
//   seed: 42
//   threads: 1
//   lattice: {lambda_A: 5, lambda_I: 2, eps: 0.1, delta: 1}
//   window: {T: 32, W: 64}
//   probes: {count: 10000, phi_min: 0.1}
//   tolerances: {el: 1e-12, dispersion: 1e-12, conservation: 1e-9, vanishing: 1e-10, certificate: 1e-10}
//   evolve: {steps: 100, mode: 3, pairs: 20, support: 6}
//   vanishing: {boxes: 10}
//   sphere: {tau: 1.4142135623730951}
//   anneal: {points: 6, initial_temperature: 0.5, cooling: 0.95, proposals_per_stage: 200,
//            stages: 300, step_start: 0.5, step_end: 1e-3}
//   cfs: {n: 1, kappa: 1, c: 1, dimension: 4, samples: 1000}
//
// Every section is optional; missing keys keep their defaults.
#include "cvp/lagrangians.hpp"
#include "cvp/minimality.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace cvp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { lattice, sphere, cfs };

std::string to_string(ModelKind m);

struct Tolerances {
    double el = 1e-12;
    double dispersion = 1e-12;
    double conservation = 1e-9;
    double vanishing = 1e-10;
    double certificate = 1e-10;
};

struct EvolveOptions {
    int steps = 100;
    int mode = 3;
    int pairs = 20;
    int support = 6;
};

struct CfsSampling {
    int dimension = 4;
    int samples = 1000;
};

struct ExperimentConfig {
    ModelKind model = ModelKind::lattice;
    std::uint64_t seed = 42;
    int threads = 1;
    LatticeParams lattice;
    int window_T = 32;
    int window_W = 64;
    std::size_t probe_count = 10000;
    double phi_min = 0.1;
    Tolerances tol;
    EvolveOptions evolve;
    int vanishing_boxes = 10;
    SphereParams sphere;
    int anneal_points = 6;
    AnnealSchedule anneal;
    CfsParams cfs;
    CfsSampling cfs_sampling;

    /// Re-checks every constraint; throws ConfigError naming the first violation.
    void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& yaml_text);

}  // namespace cvp
