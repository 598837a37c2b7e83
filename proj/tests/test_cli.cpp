// End-to-end checks of the CLI binary: exit-code contract, file round trips,
// and the headline numbers of each subcommand.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biloc/io.hpp"

using namespace biloc;
namespace fs = std::filesystem;

namespace {

const char* cli = BILOC_CLI_PATH;

fs::path work_dir() {
    fs::path p = fs::temp_directory_path() / "biloc_cli_test";
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args) {
    fs::path out = work_dir() / "stdout.txt";
    std::string cmd = std::string(cli) + " " + args + " >" + out.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    (void)rc;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("canonical -> validate -> evaluate round trip") {
    fs::path dir = work_dir() / "canon";
    REQUIRE(run("canonical --out " + dir.string()) == 0);

    std::string sc = (dir / "scenario.json").string();
    std::string st = (dir / "state.json").string();
    std::string ob = (dir / "observables.json").string();

    CHECK(run("validate --scenario " + sc) == 0);

    fs::path rep = dir / "report.json";
    fs::path tab = dir / "table.csv";
    REQUIRE(run("evaluate --scenario " + sc + " --state " + st + " --observables " + ob +
                " --out " + rep.string() + " --table " + tab.string()) == 0);
    json j = load_json_file(rep.string());
    CHECK(std::abs(j["S"].get<double>() - 2.0 * std::sqrt(2.0)) < 1e-9);
    CHECK(j["independence_residual"].get<double>() <= 1e-12);
    CHECK(j["marginal_factorization_residual"].get<double>() <= 1e-10);
    std::ifstream tin(tab);
    std::string header;
    std::getline(tin, header);
    CHECK(header == "x,y,z,a,b,c,p");
}

TEST_CASE("exit codes: parse errors give 2, domain violations give 1") {
    fs::path dir = work_dir();
    fs::path empty = dir / "empty.json";
    std::ofstream(empty.string()).close();
    CHECK(run("validate --scenario " + empty.string()) == 2);
    CHECK(run("validate --scenario " + (dir / "nope.json").string()) == 2);
    CHECK(run("frobnicate") == 2);

    // overlapping algebras: same nonabelian algebra on the A and B slots
    ScenarioPtr t = make_tensor_scenario(2, 1, 1, 2);
    auto bad = std::make_shared<Scenario>(t->dim, t->alg_A, t->alg_A, t->alg_C);
    fs::path badp = dir / "overlap.json";
    save_json_file(badp.string(), scenario_to_json(*bad));
    CHECK(run("validate --scenario " + badp.string()) == 1);
}

TEST_CASE("classical prints the bilocal bound") {
    std::string out = run_capture("classical 2 2");
    CHECK(out == "2.0\n");
}

TEST_CASE("BILOC_MAX_DIM caps the ambient dimension") {
    fs::path dir = work_dir() / "cap";
    REQUIRE(run("canonical --out " + dir.string()) == 0);
    std::string cmd = "BILOC_MAX_DIM=8 " + std::string(cli) + " validate --scenario " +
                      (dir / "scenario.json").string() + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 1);
}

TEST_CASE("optimize recovers the canonical value and reports the grid oracle") {
    fs::path dir = work_dir() / "canon2";
    REQUIRE(run("canonical --out " + dir.string()) == 0);
    fs::path trace = dir / "trace.json";
    REQUIRE(run("optimize --scenario " + (dir / "scenario.json").string() + " --state " +
                (dir / "state.json").string() + " --restarts 12 --seed 4 --resolution 24 --out " +
                trace.string()) == 0);
    json j = load_json_file(trace.string());
    CHECK(j["best_S"].get<double>() >= 2.0 * std::sqrt(2.0) - 1e-6);
    CHECK(j["seed"].get<std::uint64_t>() == 4);
    CHECK(j["grid_oracle_S"].get<double>() <= j["best_S"].get<double>() + 1e-6);
}

TEST_CASE("sweep CSV crosses 2 between 0.70 and 0.71") {
    fs::path csv = work_dir() / "sweep.csv";
    REQUIRE(run("sweep --grid 0.0,0.5,0.7,0.71,1.0 --out " + csv.string()) == 0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,S_best,converged,iters");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string v, s;
        std::getline(ss, v, ',');
        std::getline(ss, s, ',');
        rows.emplace_back(std::stod(v), std::stod(s));
    }
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].second < 2.0);  // v = 0.70
    CHECK(rows[3].second > 2.0);  // v = 0.71
    CHECK(std::abs(rows[4].second - 2.0 * std::sqrt(2.0)) < 1e-9);
}
