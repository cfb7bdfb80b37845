#include "cvp/config.hpp"
#include "cvp/io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace cvp;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "cvp_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("format_double round trips") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 1000; ++k) {
        const double x = cvp::testing::uniform(rng, -1e3, 1e3) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(18.0) == "18");
}

TEST_CASE("measure JSON") {
    const auto oct = octahedron_measure();
    const auto j = to_json(oct);
    CHECK(j.at("model") == "sphere");
    CHECK(j.dump().find("\"model\"") < j.dump().find("\"atoms\""));
    const auto back = sphere_measure_from_json(j);
    REQUIRE(back.size() == oct.size());
    for (std::size_t i = 0; i < oct.size(); ++i) {
        CHECK(points_coincide(back.point(i), oct.point(i)));
        CHECK(back.weight(i) == oct.weight(i));
    }
    CHECK_THROWS_AS(lattice_measure_from_json(j), IoError);

    const LatticeWindow win(4, 8);
    const auto lat = lattice_measure_from_json(to_json(win.measure()));
    CHECK(lat.size() == win.size());
    CHECK(lat.point(5) == win.measure().point(5));

    Json bad = j;
    bad["atoms"][0]["weight"] = -1.0;
    CHECK_THROWS_AS(sphere_measure_from_json(bad), std::invalid_argument);
}

TEST_CASE("report JSON") {
    ElReport el;
    el.min_ell_on_probes = std::numeric_limits<double>::infinity();
    el.families.push_back({"off_lattice", 3, 5.0, 7.0});
    const auto j = to_json(el);
    CHECK(j.at("min_ell_on_probes") == "inf");
    CHECK(j.at("families").at(0).at("name") == "off_lattice");

    MinimalityCertificate cert;
    cert.analytic_epsilon = 1.0;
    const auto cj = to_json(cert);
    CHECK(cj.begin().key() == "verdict");
    CHECK(cj.at("analytic_epsilon") == 1.0);
    CHECK(cj.dump() == to_json(cert).dump());
    cert.analytic_epsilon.reset();
    CHECK(to_json(cert).at("analytic_epsilon").is_null());

    const auto st = lattice_evolve(plane_wave_cauchy(16, 2), LatticeParams{}, 5);
    const auto back = lattice_state_from_json(to_json(st));
    CHECK(back.t_begin() == st.t_begin());
    CHECK(back.t_end() == st.t_end());
    for (int t = st.t_begin(); t < st.t_end(); ++t) {
        for (int s = 0; s < 16; ++s) {
            CHECK(back.v_phi(t, s) == st.v_phi(t, s));
        }
    }
}

TEST_CASE("CSV series") {
    SigmaReport rep;
    rep.values = {{0, 1.5}, {1, 1.5}, {2, 1.25}};
    const auto p = scratch("sigma.csv");
    write_sigma_csv(p, rep);
    CHECK(slurp(p) == "t,sigma\n0,1.5\n1,1.5\n2,1.25\n");

    const auto st = lattice_evolve(plane_wave_cauchy(8, 1), LatticeParams{}, 1);
    const auto sp = scratch("state.csv");
    write_state_csv(sp, st);
    const auto text = slurp(sp);
    CHECK(text.rfind("t,s,b,v_phi\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 8);
    write_state_csv(sp, st);
    CHECK(slurp(sp) == text);

    ElReport el;
    el.nu_used = 18.0;
    el.seed = 42;
    const auto ep = scratch("el.csv");
    write_el_summary_csv(ep, el);
    CHECK(slurp(ep) == "sup_ell_on_support,min_ell_on_probes,nu,probe_count,atoms_checked,seed\n0,0,18,0,0,42\n");

    const auto blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(write_sigma_csv(blocker / "sub" / "x.csv", rep), IoError);
    CHECK_THROWS_AS(read_json(scratch("missing.json")), IoError);
}

TEST_CASE("config loading and validation") {
    const auto def = parse_config("");
    CHECK(def.model == ModelKind::lattice);
    CHECK(def.lattice.lambda_A == 5.0);
    CHECK(def.window_W == 64);

    const auto cfg = parse_config(R"(
model: sphere
seed: 7
sphere: {tau: 1.5}
anneal: {points: 4, stages: 10}
tolerances: {conservation: 1e-8}
)");
    CHECK(cfg.model == ModelKind::sphere);
    CHECK(cfg.seed == 7u);
    CHECK(cfg.sphere.tau == 1.5);
    CHECK(cfg.anneal_points == 4);
    CHECK(cfg.anneal.stages == 10);
    CHECK(cfg.anneal.cooling == 0.95);
    CHECK(cfg.tol.conservation == 1e-8);

    auto message_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("lattice: {lambda_A: 1}").find("lambda_A") != std::string::npos);
    CHECK(message_of("lattice: {lambda_I: 1}").find("lambda_I") != std::string::npos);
    CHECK(message_of("window: {W: 4}").find("window.W") != std::string::npos);
    CHECK(message_of("model: torus").find("model") != std::string::npos);
    CHECK(message_of("lattice: {lamda_A: 5}").find("unknown key") != std::string::npos);
    CHECK(message_of("seed: [1, 2").find("malformed") != std::string::npos);
    CHECK(message_of("window: {T: abc}").find("window.T") != std::string::npos);
    CHECK(message_of("model: sphere\nsphere: {tau: 0.5}").find("tau") != std::string::npos);
    CHECK(message_of("model: cfs\ncfs: {kappa: 0}").find("kappa") != std::string::npos);
    // Only the chosen model's constraints apply.
    CHECK_NOTHROW(parse_config("model: sphere\nlattice: {lambda_A: 1}"));
    CHECK_THROWS_AS(load_config(scratch("no_such.yaml")), ConfigError);
}
