// Batch front-end: loads an experiment config, runs one check, writes reports.
//
//   cvp <command> --config FILE [--out DIR] [--seed N] [--steps N] [--tol X] [--threads N]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration or usage error.
#include "cvp/config.hpp"
#include "cvp/io.hpp"
#include "cvp/reduction.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>

using namespace cvp;

namespace {

// Raised for requests the config cannot satisfy (wrong model for the command).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    ExperimentConfig cfg;
    std::filesystem::path out;
    std::optional<double> tol;
    std::string command;

    double tolerance(double fallback) const { return tol.value_or(fallback); }

    void require_model(std::initializer_list<ModelKind> allowed) const {
        for (ModelKind m : allowed) {
            if (cfg.model == m) {
                return;
            }
        }
        throw UsageError(command + " does not support model '" + to_string(cfg.model) + "'");
    }

    Json header() const {
        Json h{{"command", command}, {"model", to_string(cfg.model)}, {"seed", cfg.seed}};
        switch (cfg.model) {
            case ModelKind::lattice:
                h["params"] = to_json(cfg.lattice);
                h["window"] = Json{{"T", cfg.window_T}, {"W", cfg.window_W}};
                break;
            case ModelKind::sphere: h["params"] = to_json(cfg.sphere); break;
            case ModelKind::cfs: h["params"] = to_json(cfg.cfs); break;
        }
        return h;
    }

    bool finish(Json report, bool pass) const {
        report["pass"] = pass;
        write_json(out / (command + ".json"), report);
        std::cout << command << ": " << (pass ? "pass" : "FAIL") << '\n';
        return pass;
    }
};

ProbeSpec probe_spec(const ExperimentConfig& cfg) {
    ProbeSpec spec;
    spec.count = cfg.probe_count;
    spec.seed = cfg.seed;
    spec.phi_min = cfg.phi_min;
    return spec;
}

double sphere_nu(const DiscreteMeasure<SpherePoint>& rho, const SphereLagrangian& lag, const ProbeSpec& spec) {
    auto probes = sphere_probes(rho, spec);
    for (const auto& a : rho.atoms()) {
        probes.push_back(a.point);
    }
    return calibrate_nu<SpherePoint>(rho, lag, probes);
}

bool run_verify_el(const Context& ctx) {
    ctx.require_model({ModelKind::lattice, ModelKind::sphere});
    const auto spec = probe_spec(ctx.cfg);
    const double tol = ctx.tolerance(ctx.cfg.tol.el);
    ElReport rep;
    if (ctx.cfg.model == ModelKind::lattice) {
        const LatticeWindow win(ctx.cfg.window_T, ctx.cfg.window_W);
        const auto lag = win.lagrangian(ctx.cfg.lattice);
        rep = el_check(win, lag, calibrate_nu(win, lag, spec), spec);
    } else {
        const SphereLagrangian lag(ctx.cfg.sphere);
        const auto rho = octahedron_measure();
        rep = el_check(rho, lag, sphere_nu(rho, lag, spec), spec);
    }
    write_el_summary_csv(ctx.out / "verify-el.csv", rep);
    Json report = ctx.header();
    report["tolerance"] = tol;
    report["el"] = to_json(rep);
    return ctx.finish(report, rep.sup_ell_on_support <= tol && rep.min_ell_on_probes > 0.0);
}

bool run_evolve(const Context& ctx) {
    ctx.require_model({ModelKind::lattice});
    const auto& cfg = ctx.cfg;
    const double tol = ctx.tolerance(cfg.tol.dispersion);
    const auto state = lattice_evolve(plane_wave_cauchy(cfg.window_W, cfg.evolve.mode), cfg.lattice, cfg.evolve.steps);
    double stencil = 0.0;
    double exact = 0.0;
    for (int t = state.t_begin(); t < state.t_end(); ++t) {
        for (int s = 0; s < cfg.window_W; ++s) {
            exact = std::max(exact, std::abs(state.v_phi(t, s) - plane_wave_value(cfg.window_W, cfg.evolve.mode, t, s)));
            if (t > state.t_begin() && t + 1 < state.t_end()) {
                const double r = state.v_phi(t + 1, s) - state.v_phi(t, s + 1) - state.v_phi(t, s - 1) +
                                 state.v_phi(t - 1, s);
                stencil = std::max(stencil, std::abs(r));
            }
        }
    }
    write_state_csv(ctx.out / "evolve_state.csv", state);
    write_json(ctx.out / "evolve_state.json", to_json(state));
    Json report = ctx.header();
    report["mode"] = cfg.evolve.mode;
    report["steps"] = cfg.evolve.steps;
    report["tolerance"] = tol;
    report["max_stencil_residual"] = stencil;
    report["max_deviation_from_plane_wave"] = exact;
    return ctx.finish(report, stencil <= tol);
}

bool run_conserve(const Context& ctx) {
    ctx.require_model({ModelKind::lattice});
    const auto& cfg = ctx.cfg;
    const double tol = ctx.tolerance(cfg.tol.conservation);
    std::mt19937_64 rng(cfg.seed);
    bool pass = true;
    Json pairs = Json::array();
    for (int k = 0; k < cfg.evolve.pairs; ++k) {
        const auto u = lattice_evolve(random_compact_cauchy(cfg.window_W, cfg.evolve.support, rng), cfg.lattice,
                                      cfg.evolve.steps);
        const auto v = lattice_evolve(random_compact_cauchy(cfg.window_W, cfg.evolve.support, rng), cfg.lattice,
                                      cfg.evolve.steps);
        const auto rep = conservation_sweep(u, v, cfg.lattice);
        const double rel = rep.max_deviation / std::max(1.0, std::abs(rep.reference));
        pass = pass && rel <= tol;
        pairs.push_back(Json{{"reference", rep.reference}, {"max_deviation", rep.max_deviation}, {"relative", rel}});
        if (k == 0) {
            write_sigma_csv(ctx.out / "conserve_sigma.csv", rep);
        }
    }

    // The scalar sector grows like 2^t, so its sweep stays short.
    const int scalar_steps = std::min(cfg.evolve.steps, 30);
    const auto roots = scalar_characteristic_roots(cfg.lattice);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> pu(cfg.window_W), pv(cfg.window_W);
    for (int s = 0; s < cfg.window_W; ++s) {
        pu[s] = dist(rng);
        pv[s] = dist(rng);
    }
    const auto su = lattice_evolve(scalar_mode_cauchy(pu, roots.r_minus, scalar_steps - 1), cfg.lattice,
                                   scalar_steps - 1, TimeDirection::backward);
    const auto sv = lattice_evolve(scalar_mode_cauchy(pv, roots.r_plus, 0), cfg.lattice, scalar_steps - 1);
    const auto scalar = conservation_sweep(su, sv, cfg.lattice);
    const double scalar_rel = scalar.max_deviation / std::max(1.0, std::abs(scalar.reference));
    pass = pass && scalar_rel <= tol;

    Json report = ctx.header();
    report["steps"] = cfg.evolve.steps;
    report["tolerance"] = tol;
    report["wave_pairs"] = std::move(pairs);
    report["scalar"] = to_json(scalar);
    report["scalar_relative"] = scalar_rel;
    return ctx.finish(report, pass);
}

bool run_vanishing(const Context& ctx) {
    ctx.require_model({ModelKind::lattice});
    const auto& cfg = ctx.cfg;
    const double tol = ctx.tolerance(cfg.tol.vanishing);
    const int T = cfg.window_T;
    const int W = cfg.window_W;
    std::mt19937_64 rng(cfg.seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    bool pass = true;
    Json boxes = Json::array();
    for (int k = 0; k < cfg.vanishing_boxes; ++k) {
        const auto pair = random_solution_pair(T, W, cfg.lattice, rng, cfg.evolve.support);
        const auto win = pair.u.window();
        const auto lag = win.lagrangian(cfg.lattice);
        const int t_lo = pick(1, T - 3);
        const int t_hi = pick(t_lo, T - 3);
        const int s_lo = pick(0, W - 1);
        const int s_hi = pick(s_lo, W - 1);
        const double val = surface_layer_integral(lattice_box(t_lo, t_hi, s_lo, s_hi), pair.u.to_jet(),
                                                  pair.v.to_jet(), win, lag);
        pass = pass && std::abs(val) <= tol;
        boxes.push_back(Json{{"t", {t_lo, t_hi}}, {"s", {s_lo, s_hi}}, {"sigma", val}});
    }
    Json report = ctx.header();
    report["tolerance"] = tol;
    report["boxes"] = std::move(boxes);
    return ctx.finish(report, pass);
}

bool run_certify(const Context& ctx) {
    ctx.require_model({ModelKind::lattice, ModelKind::sphere});
    CertifyOptions opts;
    opts.probes = probe_spec(ctx.cfg);
    opts.tolerance = ctx.tolerance(ctx.cfg.tol.certificate);
    MinimalityCertificate cert;
    if (ctx.cfg.model == ModelKind::lattice) {
        const LatticeWindow win(ctx.cfg.window_T, ctx.cfg.window_W);
        const auto lag = win.lagrangian(ctx.cfg.lattice);
        cert = certify_local_min(win, ctx.cfg.lattice, calibrate_nu(win, lag, opts.probes), opts);
    } else {
        const SphereLagrangian lag(ctx.cfg.sphere);
        const auto rho = octahedron_measure();
        cert = certify_local_min(rho, lag, sphere_nu(rho, lag, opts.probes), opts);
    }
    Json report = ctx.header();
    report["certificate"] = to_json(cert);
    return ctx.finish(report, cert.verdict);
}

bool run_anneal(const Context& ctx) {
    ctx.require_model({ModelKind::sphere});
    const auto& cfg = ctx.cfg;
    const SphereLagrangian lag(cfg.sphere);
    const auto res = anneal_sphere(cfg.anneal_points, lag, cfg.anneal, cfg.seed);
    Json report = ctx.header();
    report["result"] = to_json(res);
    bool pass = true;
    if (cfg.anneal_points == 6) {
        const double tol = ctx.tolerance(1e-3);
        const double align = octahedron_alignment_error(res.measure);
        report["octahedron_action_gap"] = res.action - 8.0 / 3.0;
        report["octahedron_alignment_error"] = align;
        report["tolerance"] = tol;
        pass = res.action <= 8.0 / 3.0 + tol && align < 1e-2;
    }
    return ctx.finish(report, pass);
}

bool run_cfs_eval(const Context& ctx) {
    ctx.require_model({ModelKind::cfs});
    const auto& cfg = ctx.cfg;
    const double tol = ctx.tolerance(1e-10);
    const CfsLagrangian lag(cfg.cfs);
    std::mt19937_64 rng(cfg.seed);
    double max_asym = 0.0;
    double min_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.cfs_sampling.samples; ++k) {
        const auto x = cfs_random_operator(cfg.cfs_sampling.dimension, cfg.cfs.n, rng);
        const auto y = cfs_random_operator(cfg.cfs_sampling.dimension, cfg.cfs.n, rng);
        const double xy = lag(x, y);
        max_asym = std::max(max_asym, std::abs(xy - lag(y, x)));
        min_value = std::min(min_value, xy);
    }
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const double hand = lag(d, d);
    const double hand_expected = 4.0 * cfg.cfs.kappa;

    Json report = ctx.header();
    report["dimension"] = cfg.cfs_sampling.dimension;
    report["samples"] = cfg.cfs_sampling.samples;
    report["tolerance"] = tol;
    report["max_asymmetry"] = max_asym;
    report["min_value"] = min_value;
    report["diag_case"] = Json{{"value", hand}, {"expected", hand_expected}};
    const bool hand_ok = cfg.cfs.n != 1 || hand == hand_expected;
    return ctx.finish(report, max_asym <= tol && min_value >= 0.0 && hand_ok);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal variational principle checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
    std::optional<double> tol;
    std::optional<int> threads;
    app.add_option("--config", config_path, "YAML experiment config")->required();
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--steps", steps, "Evolution steps");
    app.add_option("--tol", tol, "Tolerance of the command's main check");
    app.add_option("--threads", threads, "Worker threads for reductions");

    using Runner = bool (*)(const Context&);
    const std::vector<std::tuple<std::string, std::string, Runner>> commands{
        {"verify-el", "EL equations on the support and off it", run_verify_el},
        {"evolve", "Plane wave evolution and stencil residual", run_evolve},
        {"conserve", "Conservation of the slice symplectic form", run_conserve},
        {"vanishing", "Surface layer integral over compact boxes", run_vanishing},
        {"certify", "Sufficient local-minimality conditions", run_certify},
        {"anneal", "Simulated annealing on the sphere", run_anneal},
        {"cfs-eval", "Symmetry and positivity of the CFS Lagrangian", run_cfs_eval},
    };
    for (const auto& [name, help, fn] : commands) {
        app.add_subcommand(name, help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    Context ctx;
    try {
        ctx.cfg = load_config(config_path);
        if (seed) {
            ctx.cfg.seed = *seed;
        }
        if (steps) {
            ctx.cfg.evolve.steps = *steps;
        }
        if (threads) {
            ctx.cfg.threads = *threads;
        }
        ctx.cfg.validate();
        if (tol && !(*tol > 0.0)) {
            throw ConfigError("--tol must be positive");
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    ctx.out = out_dir;
    ctx.tol = tol;
    set_thread_count(static_cast<unsigned>(ctx.cfg.threads));

    for (const auto& [name, help, fn] : commands) {
        if (!app.got_subcommand(name)) {
            continue;
        }
        ctx.command = name;
        try {
            write_json(ctx.out / (name + ".metadata.json"),
                       Json{{"command", name}, {"config", config_path}, {"started_utc", utc_now()},
                            {"threads", ctx.cfg.threads}});
            return fn(ctx) ? 0 : 1;
        } catch (const UsageError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        } catch (const IoError& e) {
            std::cerr << "i/o error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception& e) {
            std::cerr << name << " failed: " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}
