// Drives the installed CLI binary end to end through a shell; the binary path
// comes from the build system via HWM_CLI_PATH.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hwm/constraints.hpp"
#include "hwm/state.hpp"

#ifndef HWM_CLI_PATH
#error "HWM_CLI_PATH must be defined"
#endif

using namespace hwm;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HWM_CLI_PATH) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

struct TempStateFile {
    std::string path;
    explicit TempStateFile(const SolitonState& s, const std::string& name) : path(name) {
        write_state_file(s, path);
    }
    ~TempStateFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate exit codes") {
    SolitonState empty;
    empty.m0 = {0, 0, 1};
    TempStateFile f(empty, "cli_n0.json");
    CHECK(run("validate " + f.path) == 0);

    SolitonState bad;
    bad.m0 = {0, 0, 1};
    bad.poles = {cplx(0, 1)};
    bad.velocities = {cplx(0)};
    bad.spins = {CVec3{{{cplx(1, 0), cplx(0, 1), cplx(0, 0)}}}};
    TempStateFile g(bad, "cli_bad.json");
    CHECK(run("validate " + g.path) == 2);
    CHECK(slurp("cli_stderr.txt").find("constraint_validation") != std::string::npos);
}

TEST_CASE("config errors exit 4 with a JSON diagnostic") {
    CHECK(run("validate does_not_exist.json") == 4);
    CHECK(slurp("cli_stderr.txt").find("\"error\"") != std::string::npos);

    SolitonState empty;
    empty.m0 = {0, 0, 1};
    TempStateFile f(empty, "cli_n0b.json");
    CHECK(run("validate " + f.path + " --tol 1.0") == 4);  // outside the sane range
}

TEST_CASE("integrate writes a sampled trajectory") {
    const PresetResult p = two_soliton_preset(0.5, -0.5, {1.0, 1.0}, 0);
    TempStateFile f(p.state, "cli_preset.json");
    CHECK(run("integrate " + f.path + " --t-end 10 --out cli_traj.jsonl") == 0);
    CHECK(count_lines("cli_traj.jsonl") >= 100);

    SUBCASE("byte-identical across repeated runs") {
        const std::string first = slurp("cli_traj.jsonl");
        CHECK(run("integrate " + f.path + " --t-end 10 --out cli_traj2.jsonl") == 0);
        CHECK(first == slurp("cli_traj2.jsonl"));
        std::remove("cli_traj2.jsonl");
    }
    SUBCASE("events exit 3 and appear in the file") {
        CHECK(run("integrate " + f.path + " --t-end 40 --eta-collision 0.5 --out cli_ev.jsonl") == 3);
        CHECK(slurp("cli_ev.jsonl").find("\"event\"") != std::string::npos);
        std::remove("cli_ev.jsonl");
    }
    std::remove("cli_traj.jsonl");
}

TEST_CASE("integrate refuses an inadmissible state with exit 2") {
    SolitonState bad;
    bad.m0 = {0, 0, 1};
    bad.poles = {cplx(0, 1)};
    bad.velocities = {cplx(0)};
    bad.spins = {CVec3{{{cplx(1, 0), cplx(0, 1), cplx(0, 0)}}}};
    TempStateFile f(bad, "cli_bad2.json");
    CHECK(run("integrate " + f.path + " --t-end 1") == 2);
}

TEST_CASE("probe subcommand produces a report and provenance copy") {
    std::ofstream spec("cli_probe.json");
    spec << R"({"preset":{"v1":1.0,"v2":-1.0,"heights":[1,1],"seed":0},"horizon":20,"targets":[1,-1]})";
    spec.close();
    CHECK(run("probe two-soliton cli_probe.json --out-dir cli_probe_out") == 0);
    CHECK(slurp("cli_probe_out/report.json").find("conclusion_witnessed") != std::string::npos);
    CHECK(slurp("cli_probe_out/input.json") == slurp("cli_probe.json"));
    std::remove("cli_probe.json");
    (void)!std::system("rm -rf cli_probe_out");
}

TEST_CASE("sweep emits one CSV row per cell plus header") {
    std::ofstream grid("cli_grid.json");
    grid << R"({"v1":[1.0],"v2":[-2.0,-1.0,-0.5],"heights":[0.5,1.0,2.0],"horizon":2.0})";
    grid.close();
    CHECK(run("sweep cli_grid.json --out-dir cli_sweep_out") == 0);
    CHECK(count_lines("cli_sweep_out/sweep.csv") == 10);
    std::remove("cli_grid.json");
    (void)!std::system("rm -rf cli_sweep_out");
}

TEST_CASE("field-scan CSV") {
    const PresetResult p = two_soliton_preset(0.5, -0.5, {1.0, 1.0}, 0);
    TempStateFile f(p.state, "cli_scan_state.json");
    CHECK(run("field-scan " + f.path + " --xmin -5 --xmax 5 --n 11 --out cli_scan.csv") == 0);
    CHECK(count_lines("cli_scan.csv") == 12);
    CHECK(slurp("cli_scan.csv").rfind("x,m1,m2,m3,residual_norm", 0) == 0);
    std::remove("cli_scan.csv");
}

TEST_CASE("energy-check agreement on an admissible state") {
    const SolitonState s = random_admissible({cplx(0, 1)}, {0, 0, 1}, 1, {});
    TempStateFile f(s, "cli_energy.json");
    CHECK(run("energy-check " + f.path + " --out-dir cli_energy_out") == 0);
    const std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("energy_algebraic") != std::string::npos);
    const auto j = nlohmann::json::parse(out);
    CHECK(j["rel_gap"].get<double>() <= 1e-4);
    CHECK(slurp("cli_energy_out/input.json") == slurp(f.path));  // provenance copy
    (void)!std::system("rm -rf cli_energy_out");
}

}  // TEST_SUITE
