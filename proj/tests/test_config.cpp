#include "doctest.h"

#include "ygraph/config.hpp"
#include "ygraph/csvio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace ygraph;

namespace {

std::string error_text(const std::string& cfg)
{
    try {
        parse_config_text(cfg, "s.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch(const std::string& name)
{
    auto d = std::filesystem::temp_directory_path() / ("ygraph_test_config_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("minimal config takes the documented defaults")
{
    const auto c = parse_config_text("[grid]\nh = 0.05\n[coupling]\ntype = type2\n");
    CHECK(c.L == 50);
    CHECK(c.h == 0.05);
    CHECK(c.dt == 1e-3);
    CHECK(c.T == 1);
    CHECK(c.mode == Mode::Linear);
    CHECK(c.coupling.kind == CouplingKind::Type2);
    CHECK(c.initial[0].kind == "zero");
}

TEST_CASE("full config")
{
    const std::string text = R"(# soliton run
[grid]
L = 40
h = 0.1
[time]
T = 0.5
dt = 0.002   # step
mode = nonlinear
snapshot_every = 50
[coupling]
type = type1
alpha2 = 2
alpha3 = 1
beta2 = 0.5
beta3 = 0
[initial]
u = soliton
u.speed = 2
u.center = -20
v = gaussian
v.amp = 0.3
v.center = 10
v.width = 2
[sponge]
fraction = 0.1
strength = 5
)";
    const auto c = parse_config_text(text);
    CHECK(c.L == 40);
    CHECK(c.mode == Mode::Nonlinear);
    CHECK(c.snapshot_every == 50);
    const auto s = VertexCoupling::special(CouplingKind::Type1, 2, 1, 0.5, 0);
    CHECK(c.coupling.a2 == s.a2);
    CHECK(c.coupling.b2 == s.b2);
    CHECK(c.coupling.c2 == s.c2);
    CHECK(c.initial[0].kind == "soliton");
    CHECK(c.initial[0].speed == 2);
    CHECK(c.initial[1].width == 2);
    CHECK(c.sponge_strength == 5);

    // The echo parses back to the same scenario.
    const auto d = parse_config_text(config_text(c));
    CHECK(config_text(d) == config_text(c));
    CHECK(d.coupling.c2 == c.coupling.c2);
    CHECK(d.initial[1].center == 10);
}

TEST_CASE("compatibility violation cites the condition")
{
    const std::string msg = error_text(
        "[coupling]\ntype = type1\na2 = 1\n[initial]\nu = gaussian\nu.amp = 1\nu.center = 0\nv = gaussian\nv.amp = 0.5\n"
        "v.center = 0\nw = gaussian\nw.center = 0\n");
    CHECK(msg.find("u0(0) = a2 v0(0) = a3 w0(0)") != std::string::npos);
    CHECK(msg.find("s.cfg:5:") != std::string::npos);
}

TEST_CASE("errors are aggregated with line numbers")
{
    const std::string msg = error_text("[grid]\nh = 0.0x5\nL = 10\n[time]\nmode = fast\ncolour = red\n[mesh]\nn = 3\n"
                                       "[grid]\nL = 20\nnonsense\n");
    CHECK(msg.find("s.cfg:2: h: expected a number, got '0.0x5'") != std::string::npos);
    CHECK(msg.find("s.cfg:5: mode: expected linear | nonlinear") != std::string::npos);
    CHECK(msg.find("s.cfg:6: unknown key 'colour' in [time]") != std::string::npos);
    CHECK(msg.find("s.cfg:7: unknown section [mesh]") != std::string::npos);
    CHECK(msg.find("s.cfg:10: duplicate key 'L' (first set on line 3)") != std::string::npos);
    CHECK(msg.find("s.cfg:11: expected key = value") != std::string::npos);

    const std::string inv = error_text("[grid]\nL = 10\nh = 0.5\n[time]\ndt = 1\n[sponge]\nfraction = 0.4\n");
    CHECK(inv.find("s.cfg:3: h must not exceed L/100") != std::string::npos);
    CHECK(inv.find("s.cfg:5: dt must not exceed h") != std::string::npos);
    CHECK(inv.find("s.cfg:7: sponge_fraction") != std::string::npos);

    CHECK(error_text("[coupling]\nalpha2 = 1\na2 = 1\n").find("not both") != std::string::npos);
    CHECK(error_text("[coupling]\nalpha2 = 0\n").find("nonzero") != std::string::npos);
    CHECK_THROWS_AS(parse_config("/nonexistent/scenario.cfg"), ConfigError);
}

TEST_CASE("profile files")
{
    const auto dir = scratch("profile");
    {
        std::ofstream f(dir / "v0.csv");
        f << "x,value\n2,0\n1,0.5\n0, 0\n";
    }
    {
        std::ofstream f(dir / "s.cfg");
        f << "[initial]\nv = file\nv.file = v0.csv\n";
    }
    const auto c = parse_config(dir / "s.cfg");
    REQUIRE(c.initial[1].table.size() == 3);
    CHECK(c.initial[1](0.5) == doctest::Approx(0.25));
    CHECK(c.initial[1](3.0) == 0.0);

    {
        std::ofstream f(dir / "bad.csv");
        f << "x,value\n1,abc\n";
    }
    CHECK_THROWS_WITH_AS(read_profile_csv(dir / "bad.csv"), doctest::Contains("bad.csv:2"), ContractError);
    CHECK(error_text("[initial]\nw = file\n").find("w.file") != std::string::npos);
}

TEST_CASE("outputs are deterministic")
{
    ScenarioConfig s;
    s.L = 10;
    s.h = 0.1;
    s.dt = 0.01;
    s.T = 0.05;
    s.initial[1] = {"gaussian", 1.0, 6.0, 1.0};
    const auto tr = evolve(s);

    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
        const auto dir = scratch("out" + std::to_string(k));
        const auto files = write_edge_snapshots(dir, tr.states.back());
        REQUIRE(files.size() == 3);
        CHECK(files[0].filename() == "edge_u_t0.050000.csv");
        write_diagnostics(dir / "diagnostics.csv", tr);
        std::ostringstream all;
        for (const auto& p : {files[1], dir / "diagnostics.csv"}) all << std::ifstream(p).rdbuf();
        bytes[k] = all.str();
    }
    CHECK(bytes[0] == bytes[1]);
    CHECK(bytes[0].rfind("x,value\n0,", 0) == 0);
    CHECK(bytes[0].find("step,t,mass_u,mass_v,mass_w,u,u_x,u_xx,v,v_x,v_xx,w,w_x,w_xx,flux,residual\n") !=
          std::string::npos);
    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);

    const auto dir = scratch("manifest");
    RunManifest m;
    m.command = "simulate";
    m.metrics["max_residual"] = 1e-13;
    write_manifest(dir / "summary.json", m);
    REQUIRE(m.outputs.size() == 1);
    std::ostringstream js;
    js << std::ifstream(dir / "summary.json").rdbuf();
    CHECK(js.str().find("\"max_residual\": 1e-13") != std::string::npos);
    CHECK(js.str().find("\"summary.json\"") != std::string::npos);
}
