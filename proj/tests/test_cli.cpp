#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "routegame/cli.hpp"

namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"routegame"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return routegame::run_cli(static_cast<int>(argv.size()), argv.data());
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    int n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("cli demo, validate and run") {
    TempDir dir("routegame_cli_test");

    REQUIRE(cli({"demo", "--out", dir.str()}) == 0);
    const std::string scn = (dir.path / "demo.scn").string();
    REQUIRE(fs::exists(scn));

    CHECK(cli({"validate", "--scenario", scn}) == 0);
    CHECK(cli({"validate", "--scenario", dir.str() + "/missing.scn"}) == 2);

    SUBCASE("short run writes one metrics row per step") {
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--steps", "12", "--svg"}) == 0);
        CHECK(count_lines(dir.path / "metrics.csv") == 13);  // header + 12 rows
        CHECK(fs::exists(dir.path / "potential.svg"));
        CHECK(fs::exists(dir.path / "delta_phi.svg"));
    }
    SUBCASE("gamma override changes the series") {
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str() + "/g1", "--steps", "12"}) == 0);
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str() + "/g2", "--steps", "12",
                     "--gamma", "2"}) == 0);
        std::ifstream a(dir.path / "g1/metrics.csv"), b(dir.path / "g2/metrics.csv");
        std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(sa != sb);
    }
    SUBCASE("reruns on the same inputs overwrite identically") {
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--steps", "9"}) == 0);
        std::ifstream a(dir.path / "metrics.csv");
        std::string first((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--steps", "9"}) == 0);
        std::ifstream b(dir.path / "metrics.csv");
        std::string second((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(first == second);
    }
}

TEST_CASE("cli equilibrium check") {
    TempDir dir("routegame_cli_eqtest");
    REQUIRE(cli({"demo", "--out", dir.str()}) == 0);
    const std::string scn = (dir.path / "demo.scn").string();

    SUBCASE("converged run passes") {
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--steps", "60",
                     "--dump-trajectory"}) == 0);
        CHECK(cli({"equilibrium-check", "--scenario", scn, "--steps", "60", "--dump",
                   dir.str() + "/trajectory.jsonl"}) == 0);
    }
    SUBCASE("truncated run does not") {
        REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--steps", "3",
                     "--dump-trajectory"}) == 0);
        CHECK(cli({"equilibrium-check", "--scenario", scn, "--steps", "3", "--dump",
                   dir.str() + "/trajectory.jsonl"}) == 1);
    }
    SUBCASE("garbage dumps are an input error") {
        const std::string bad = (dir.path / "bad.jsonl").string();
        std::ofstream(bad) << "{not json\n";
        CHECK(cli({"equilibrium-check", "--scenario", scn, "--dump", bad}) == 2);
    }
}

TEST_CASE("cli rejects bad invocations") {
    CHECK(cli({"frobnicate"}) == 2);
    CHECK(cli({"run"}) == 2);  // missing --scenario
    CHECK(cli({"run", "--scenario", "no_such_file.scn"}) == 2);
}

TEST_CASE("cli empty population edge case") {
    TempDir dir("routegame_cli_empty");
    const std::string scn = (dir.path / "empty.scn").string();
    std::ofstream(scn) << "[network]\nnodes = 2\nlink = 0 1\n[population]\nperiod = 3\n"
                          "eta = 0 2\noffset = 0 2\n[run]\nsteps = 5\n";
    REQUIRE(cli({"validate", "--scenario", scn}) == 0);
    REQUIRE(cli({"run", "--scenario", scn, "--out", dir.str(), "--dump-trajectory"}) == 0);
    CHECK(cli({"equilibrium-check", "--scenario", scn, "--dump",
               dir.str() + "/trajectory.jsonl"}) == 0);
}
