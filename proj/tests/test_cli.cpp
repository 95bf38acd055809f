#include "nld/cli.hpp"
#include "nld/io.hpp"

#include <doctest.h>

#include <filesystem>

using namespace nld;

namespace {

std::string scratch(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / "nld_cli_test";
    std::filesystem::create_directories(d);
    return (d / name).string();
}

const std::string kScenarios = std::string(NLD_SOURCE_DIR) + "/scenarios/";

}  // namespace

TEST_CASE("table matches the golden file") {
    std::string out = scratch("table.csv");
    CHECK(run_cli({"table", "--out", out}) == exit_ok);
    CHECK(read_file(out) == read_file(std::string(NLD_SOURCE_DIR) + "/tests/golden/table.csv"));
}

TEST_CASE("check-kernel exit codes") {
    std::string rep = scratch("ex10.json");
    CHECK(run_cli({"check-kernel", "--config", kScenarios + "ex10-check.json", "--report", rep}) == exit_verdict);
    CHECK(read_file(rep).find("\"failed\"") != std::string::npos);
    CHECK(run_cli({"check-kernel", "--config", kScenarios + "ex8-torsion.json", "--report", scratch("ex8.json")}) ==
          exit_ok);
}

TEST_CASE("solve writes a solution and a report") {
    std::string out = scratch("intro.csv"), rep = scratch("intro.json");
    CHECK(run_cli({"solve", "--config", kScenarios + "intro.json", "--out", out, "--report", rep}) == exit_ok);
    std::string csv = read_file(out);
    CHECK(csv.rfind("x,u", 0) == 0);
    CHECK(read_file(rep).find("residual") != std::string::npos);
}

TEST_CASE("configuration and usage errors") {
    std::string bad = scratch("bad.json");
    write_file_atomic(bad, R"({"kernel": {"id": "Ex8", "alpha": 2.5}})");
    CHECK(run_cli({"solve", "--config", bad, "--out", scratch("x.csv")}) == exit_config);
    CHECK(run_cli({"solve", "--config", scratch("missing.json")}) == exit_config);
    CHECK(run_cli({"frobnicate"}) == exit_config);
    CHECK(run_cli({"study", "nosuchstudy"}) == exit_config);
}

TEST_CASE("maximum principle study") {
    std::string out = scratch("maxprin.csv");
    CHECK(run_cli({"study", "maxprin", "--config", kScenarios + "ex14t-maxprin.json", "--out", out}) == exit_ok);
    std::string csv = read_file(out);
    CHECK(csv.rfind("h,sup_u,scale,tol,holds,path", 0) == 0);
}
