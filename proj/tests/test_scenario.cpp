#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "otsm/scenario.hpp"

using namespace otsm;
using namespace otsm::scenario;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = OTSM_CONFIG_DIR;

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string minimal_cfg(const std::string& extra_sim = "") {
    return "name = unit\n"
           "[plant]\nm = 0.1\nU = 1\n"
           "[surface]\ntype = optimal\nalpha = 0.6\n"
           "[sim]\nx1 = -1\nx2 = 0\nt_end = 2\n" + extra_sim;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("shipped friction config parses to the expected scenario") {
    const auto sc = load_scenario(kConfigDir / "friction.cfg");
    CHECK(sc.plant.m == 0.1);
    CHECK(sc.plant.U == 1.0);
    const auto* surf = std::get_if<control::OptimalSurface>(&sc.surface);
    REQUIRE(surf != nullptr);
    CHECK(surf->alpha == 0.6);
    const auto* fric = std::get_if<dynamics::FrictionPerturbation>(&sc.perturbation);
    REQUIRE(fric != nullptr);
    CHECK(fric->Fc == 0.5);
}

TEST_CASE("perturbation amplitude above the relay gain is rejected") {
    const std::string text = minimal_cfg() +
        "[perturbation]\ntype = harmonic\nA = 1.5\nomega = 20\n";
    CHECK_THROWS_AS(validate(parse_scenario(text)), ValidationError);
}

TEST_CASE("omitted dt falls back to the default") {
    CHECK(parse_scenario(minimal_cfg()).sim.dt == 1e-3);
}

TEST_CASE("unknown keys are rejected with line context") {
    const std::string text = minimal_cfg("bogus_key = 1\n");
    try {
        parse_scenario(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("normalized dump round-trips") {
    const auto sc = load_scenario(kConfigDir / "harmonic.cfg");
    const auto again = parse_scenario(dump_scenario(sc));
    CHECK(sc == again);
}

TEST_CASE("duplicate batch names are rejected before execution") {
    auto a = parse_scenario(minimal_cfg());
    a.name = "same";
    auto b = a;
    const fs::path dir = fresh_dir("otsm_dup_batch");
    CHECK_THROWS_AS(run_batch({a, b}, dir), ValidationError);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("batch writes trajectory and report artifacts") {
    auto sc = parse_scenario(minimal_cfg());
    sc.name = "single";
    const fs::path dir = fresh_dir("otsm_single_batch");
    const auto summaries = run_batch({sc}, dir);
    REQUIRE(summaries.size() == 1);
    CHECK(summaries.front().name == "single");
    CHECK_FALSE(summaries.front().error.has_value());

    const auto csv = slurp(dir / "single.trajectory.csv");
    CHECK(csv.rfind("t,x1,x2,s,u,xi\n", 0) == 0);
    const std::size_t expected_rows =
        static_cast<std::size_t>(std::floor(sc.sim.t_end / sc.sim.dt + 1e-9)) + 1;
    CHECK(count_lines(csv) == expected_rows + 1);
    CHECK(fs::exists(dir / "single.report.json"));
}

TEST_CASE("shipped configs classify as expected in a batch") {
    std::vector<Scenario> scenarios;
    for (const char* file : {"friction.cfg", "harmonic.cfg",
                             "random_binary.cfg"})
        scenarios.push_back(load_scenario(kConfigDir / file));
    const auto summaries = run_batch(scenarios, fresh_dir("otsm_paper_batch"));
    REQUIRE(summaries.size() == 3);
    CHECK(summaries[0].mode == "terminal");
    CHECK(summaries[1].mode == "terminal");
    CHECK(summaries[2].mode == "mixed");
    for (const auto& row : summaries) CHECK_FALSE(row.error.has_value());
}

TEST_CASE("single-value sweep matches the plain run") {
    auto base = parse_scenario(minimal_cfg());
    base.name = "sweep_base";
    const fs::path dir = fresh_dir("otsm_sweep_one");
    const auto rows = run_sweep({base, "surface.alpha", {0.6}}, dir);
    REQUIRE(rows.size() == 1);

    const auto direct = run_scenario(base);
    CHECK(rows.front().mode == analysis::to_string(direct.report.mode));
    CHECK(rows.front().crossings == direct.report.crossings.size());
    REQUIRE(rows.front().settling_time.has_value());
    REQUIRE(direct.report.settling_time.has_value());
    CHECK(*rows.front().settling_time == *direct.report.settling_time);
    CHECK(fs::exists(dir / "sweep_base.sweep.csv"));
}

TEST_CASE("alpha sweep crosses the terminal-mode boundary") {
    auto base = parse_scenario(minimal_cfg());
    base.name = "alpha_sweep";
    const auto rows = run_sweep({base, "surface.alpha", {0.3, 0.5, 0.6}},
                                fresh_dir("otsm_sweep_alpha"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mode == "twisting");
    CHECK(rows[2].mode == "terminal");
}

TEST_CASE("settling time is non-decreasing across an alpha sweep") {
    auto base = parse_scenario(minimal_cfg("dt = 0.001\n"));
    base.name = "alpha_mono";
    base.sim.t_end = 4.0;
    const auto rows = run_sweep({base, "surface.alpha", {0.6, 1.0, 2.0}},
                                fresh_dir("otsm_sweep_mono"));
    REQUIRE(rows.size() == 3);
    double prev = 0.0;
    for (const auto& row : rows) {
        REQUIRE(row.settling_time.has_value());
        CHECK(*row.settling_time >= prev);
        prev = *row.settling_time;
    }
}

TEST_CASE("substitute renames and revalidates") {
    auto base = parse_scenario(minimal_cfg());
    base.name = "base";
    const auto sub = substitute(base, "surface.alpha", 1.5);
    const auto* surf = std::get_if<control::OptimalSurface>(&sub.surface);
    REQUIRE(surf != nullptr);
    CHECK(surf->alpha == 1.5);
    CHECK(sub.name == "base_alpha_1.5");
    CHECK_THROWS_AS(substitute(base, "plant.m", -1.0), ValidationError);
    CHECK_THROWS_AS(substitute(base, "no.such", 1.0), ValidationError);
}

TEST_CASE("batch artifacts are byte-identical across runs") {
    std::vector<Scenario> scenarios;
    for (const char* file : {"alpha_base.cfg", "random_binary.cfg"})
        scenarios.push_back(load_scenario(kConfigDir / file));
    const fs::path a = fresh_dir("otsm_repro_a");
    const fs::path b = fresh_dir("otsm_repro_b");
    run_batch(scenarios, a);
    run_batch(scenarios, b);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        CHECK(slurp(entry.path()) == slurp(b / name));
    }
}
