#include "dnlat/cli.hpp"
#include "dnlat/io.hpp"
#include "dnlat/rng.hpp"

#include <json.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dnlat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dnlat_test_" + std::to_string(Rng(uint64_t(
                                                std::chrono::steady_clock::now().time_since_epoch().count()))
                                                                                .uniform01() *
                                                                            1e9));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("config parser: sections, defaults, and line-numbered errors") {
    const std::string text = R"([model]
delta = 0.5
mu = 0.25

[lattice]
n_half = 64

[stepper]
tail_ks = 4, 8, 16
)";
    const ConfigFile cfg = ConfigFile::parse_text(text);
    CHECK(cfg.get_double("model", "delta", 1.0) == 0.5);
    CHECK(cfg.get_double("model", "gamma", 0.0) == 0.0);  // default fills in
    CHECK(cfg.get_int("lattice", "n_half", 128) == 64);
    CHECK(cfg.get_int_list("stepper", "tail_ks", {}) == std::vector<int>{4, 8, 16});
    CHECK(cfg.line_of("model", "mu") == 3);
    CHECK_THROWS_AS(cfg.require_string("model", "missing"), ConfigError);

    CHECK_THROWS_AS(ConfigFile::parse_text("[model]\ndelta 0.5\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("key = 1\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_text("[model]\ndelta = abc\n").get_double("model", "delta", 0),
                    ConfigError);

    try {
        ConfigFile::parse_text("[model]\n\ndelta = oops\n").get_double("model", "delta", 0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("double_to_string round-trips exactly") {
    Rng rng(44);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
        CHECK(std::stod(double_to_string(v)) == v);
    }
    CHECK(double_to_string(0.0) == "0");
}

TEST_CASE("fnv1a is stable and input-sensitive") {
    CHECK(fnv1a_hex("abc") == fnv1a_hex("abc"));
    CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
    CHECK(fnv1a_hex("").size() == 16);
}

TEST_CASE("trajectory CSV round trip") {
    ModelParams p;
    p.mu = 0.5;
    p.gamma = 0.5;
    p.delta = 0.4;
    ForcingSpec fs_;
    fs_.family = ForcingFamily::Gaussian;
    fs_.amplitude = 0.1;
    fs_.width = 2.0;
    const Forcing g = realize_forcing(fs_, 24);
    Rng rng(3);
    StepperConfig cfg;
    cfg.scheme = StepperScheme::RK4Fixed;
    cfg.dt = 0.05;
    cfg.t_end = 2.0;
    cfg.sample_every = 0.25;
    cfg.tail_ks = {4, 8};
    const TrajectoryRecord rec =
        integrate(sample_in_ball(24, 0.8, rng), p, g, RhsKind::Combined, cfg);

    TempDir tmp;
    emit_trajectory_csv(rec, tmp.file("traj.csv"));
    const TrajectoryRecord back = read_trajectory_csv(tmp.file("traj.csv"));
    REQUIRE(back.times.size() == rec.times.size());
    CHECK(back.tail_ks == rec.tail_ks);
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        CHECK(back.times[i] == rec.times[i]);  // shortest round-trip text is exact
        CHECK(back.l2[i] == rec.l2[i]);
        CHECK(back.l4[i] == rec.l4[i]);
        CHECK(back.linf[i] == rec.linf[i]);
        CHECK(back.p[i] == rec.p[i]);
        CHECK(back.tails[0][i] == rec.tails[0][i]);
        CHECK(back.tails[1][i] == rec.tails[1][i]);
    }

    // empty trajectory: header-only file
    TrajectoryRecord empty;
    empty.tail_ks = {1, 2};
    empty.tails.resize(2);
    emit_trajectory_csv(empty, tmp.file("empty.csv"));
    CHECK(read_text_file(tmp.file("empty.csv")) == "t,l2,l4,linf,p,tail_1,tail_2\n");
}

TEST_CASE("manifest round trip") {
    TempDir tmp;
    RunManifest m;
    m.version = "dnlat test";
    m.subcommand = "simulate";
    m.config_text = "[model]\ndelta = 1\n";
    m.config_hash = fnv1a_hex(m.config_text);
    m.seed_override = 42;
    m.threads = 3;
    m.outputs = {"a.csv", "b.json"};
    write_manifest(m, tmp.file("manifest.json"));
    const RunManifest back = load_manifest(tmp.file("manifest.json"));
    CHECK(back.version == m.version);
    CHECK(back.subcommand == m.subcommand);
    CHECK(back.config_text == m.config_text);
    CHECK(back.config_hash == m.config_hash);
    REQUIRE(back.seed_override.has_value());
    CHECK(*back.seed_override == 42);
    CHECK_FALSE(back.n_half_override.has_value());
    CHECK(back.outputs == m.outputs);
}

namespace {

const char* kSimulateConfig = R"([model]
mu = 0.5
gamma = 0.5
delta = 0.5

[lattice]
n_half = 24

[forcing]
family = gaussian
amplitude = 0.05
width = 2.0

[initial]
family = gaussian
amplitude = 0.4
width = 3.0

[stepper]
scheme = rk4
dt = 0.02
t_end = 2.0
sample_every = 0.5
tail_ks = 4, 8
)";

} // namespace

TEST_CASE("cli: simulate runs, writes outputs, and replays byte-identically") {
    TempDir tmp;
    write_text_file(tmp.file("sim.ini"), kSimulateConfig);

    const int code = run_cli({"simulate", "--config", tmp.file("sim.ini"), "--out",
                              (tmp.path / "out1").string(), "--seed", "7"});
    CHECK(code == 0);
    CHECK(fs::exists(tmp.path / "out1" / "trajectory.csv"));
    CHECK(fs::exists(tmp.path / "out1" / "summary.json"));
    CHECK(fs::exists(tmp.path / "out1" / "manifest.json"));

    const nlohmann::json summary =
        nlohmann::json::parse(read_text_file((tmp.path / "out1" / "summary.json").string()));
    CHECK(summary.contains("provenance"));
    CHECK(summary["provenance"].contains("config_hash"));
    CHECK(summary["provenance"].contains("seed"));
    CHECK(summary["provenance"].contains("version"));

    const int rcode = run_cli({"replay", "--manifest", (tmp.path / "out1" / "manifest.json").string(),
                               "--out", (tmp.path / "out2").string()});
    CHECK(rcode == 0);
    CHECK(read_text_file((tmp.path / "out1" / "trajectory.csv").string()) ==
          read_text_file((tmp.path / "out2" / "trajectory.csv").string()));
    CHECK(read_text_file((tmp.path / "out1" / "summary.json").string()) ==
          read_text_file((tmp.path / "out2" / "summary.json").string()));
}

TEST_CASE("cli: exit codes follow the error taxonomy") {
    TempDir tmp;

    // negative damping: config validation failure
    write_text_file(tmp.file("bad.ini"), "[model]\ndelta = -1\n");
    CHECK(run_cli({"simulate", "--config", tmp.file("bad.ini"), "--out", tmp.file("o")}) == 1);

    // dfAL absorbing hypothesis violation
    write_text_file(tmp.file("hyp.ini"), R"([model]
mu = 1.0
delta = 1.0

[lattice]
n_half = 16

[forcing]
family = single_site
amplitude = 0.1

[absorbing]
kind = dfal
ensemble = 2
radius_R = 1.0
radius_r = 0.3
horizon = 2.0
)");
    CHECK(run_cli({"absorbing", "--config", tmp.file("hyp.ini"), "--out", tmp.file("o2")}) == 1);

    // blow-up: numerical failure
    write_text_file(tmp.file("blow.ini"), R"([model]
gamma = 1.0
delta = 0.1

[lattice]
n_half = 4

[initial]
family = single_site
amplitude = 1e200

[stepper]
scheme = rk4
dt = 10.0
t_end = 20.0
sample_every = 10.0
)");
    CHECK(run_cli({"simulate", "--config", tmp.file("blow.ini"), "--out", tmp.file("o3")}) == 2);

    // missing config file
    CHECK(run_cli({"simulate", "--config", tmp.file("nonexistent.ini")}) == 1);
}

TEST_CASE("cli: validate suite passes on defaults") {
    TempDir tmp;
    write_text_file(tmp.file("val.ini"), "[validate]\nn_states = 20\nn_half = 24\nt_end = 4.0\n");
    CHECK(run_cli({"validate", "--config", tmp.file("val.ini"), "--out", tmp.file("vout")}) == 0);
    CHECK(fs::exists(fs::path(tmp.file("vout")) / "validate.json"));
}
