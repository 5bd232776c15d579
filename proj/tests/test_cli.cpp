#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    fs::path out = fs::temp_directory_path() / "relint_cli_capture.txt";
    std::string cmd = std::string(RELINT_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {code, ss.str()};
}

fs::path sandbox() {
    fs::path dir = fs::temp_directory_path() / "relint_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = sandbox() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("check: verdict exit codes on the oscillator") {
    auto pass = write_file("osc1.json",
                           R"({"n":2,"k":2,"monomials":[{"c":[1,0],"e":[2,0]},{"c":[1,0],"e":[0,2]}]})");
    CHECK(run_cli("check --potential " + pass.string()).code == 0);

    auto fail = write_file("oscm1.json",
                           R"({"n":2,"k":2,"monomials":[{"c":[1,0],"e":[2,0]},{"c":[-1,0],"e":[0,2]}]})");
    CHECK(run_cli("check --potential " + fail.string()).code == 1);
}

TEST_CASE("check: cubic with eigenvalue 1/8 fails and explains") {
    auto v3 = write_file("v3.json",
                         R"({"n":2,"k":3,"monomials":[{"c":[0.5,0],"e":[2,1]},{"c":[2.6666666666666665,0],"e":[0,3]}]})");
    auto r = run_cli("check --potential " + v3.string() + " --explain");
    CHECK(r.code == 1);
    CHECK(r.output.find("1/8") != std::string::npos);
}

TEST_CASE("check: single-coordinate quintic passes") {
    auto v = write_file("q15.json", R"({"n":2,"k":5,"monomials":[{"c":[1,0],"e":[5,0]}]})");
    auto r = run_cli("check --potential " + v.string());
    CHECK(r.code == 0);
}

TEST_CASE("check: malformed inputs exit 2 with diagnostics") {
    auto empty = write_file("empty.json", R"({"n":2,"k":3,"monomials":[]})");
    auto r = run_cli("check --potential " + empty.string());
    CHECK(r.code == 2);
    CHECK(r.output.find("monomials") != std::string::npos);

    auto badsum = write_file("badsum.json",
                             R"({"n":2,"k":3,"monomials":[{"c":[1,0],"e":[1,1]}]})");
    r = run_cli("check --potential " + badsum.string());
    CHECK(r.code == 2);
    CHECK(r.output.find("sums to") != std::string::npos);

    auto syntax = write_file("syntax.json", R"({"n":2,"k":3,)");
    r = run_cli("check --potential " + syntax.string());
    CHECK(r.code == 2);
    CHECK(r.output.find("line") != std::string::npos);

    r = run_cli("check --potential /nonexistent/file.json");
    CHECK(r.code == 2);
}

TEST_CASE("exit-code contract on randomly corrupted potential files") {
    const std::string good =
        R"({"n":2,"k":3,"monomials":[{"c":[0.5,0],"e":[2,1]},{"c":[1,0],"e":[0,3]}]})";
    std::vector<std::string> corruptions = {
        good.substr(0, good.size() / 2),
        R"({"n":"two","k":3,"monomials":[{"c":[1,0],"e":[3,0]}]})",
        R"({"k":3,"monomials":[{"c":[1,0],"e":[3,0]}]})",
        R"({"n":2,"k":3,"monomials":[{"c":[1,0],"e":[3,0,0]}]})",
        R"({"n":2,"k":3,"monomials":[{"c":[1,0],"e":[-1,4]}]})",
        R"({"n":2,"k":3,"monomials":[{"c":[0,0],"e":[3,0]}]})",
        R"({"n":2,"k":0,"monomials":[{"c":[1,0],"e":[0,0]}]})",
        R"([1,2,3])",
    };
    for (size_t i = 0; i < corruptions.size(); ++i) {
        auto p = write_file("corrupt" + std::to_string(i) + ".json", corruptions[i]);
        auto r = run_cli("check --potential " + p.string());
        CHECK(r.code == 2);
    }
}

TEST_CASE("jset and jscan emit the published values") {
    auto r = run_cli("jset --k 3 --count 7");
    CHECK(r.code == 0);
    CHECK(r.output == "0\n1\n5\n40\n176\n1365\n5985\n");

    r = run_cli("jscan --k 4 --pbound 1000000");
    CHECK(r.code == 0);
    CHECK(r.output == "9\n");

    r = run_cli("jset --k 0 --count 3");
    CHECK(r.code == 2);
}

TEST_CASE("jset json format carries witnesses") {
    auto r = run_cli("jset --k 3 --count 4 --format json");
    CHECK(r.code == 0);
    CHECK(r.output.find("\"value\": \"40\"") != std::string::npos);
    CHECK(r.output.find("\"set\"") != std::string::npos);
}

TEST_CASE("manifest replay reproduces byte-identical outputs") {
    fs::path dir = sandbox();
    fs::path out = dir / "sect.csv";
    auto r = run_cli("poincare --system henon --alpha 0 --beta 0.5 --kinetic rel --denergy 0.6 "
                     "--orbits 2 --tend 60 --out " +
                     out.string());
    REQUIRE(r.code == 0);
    std::string first = slurp(out);
    std::string manifest = slurp(fs::path(out.string() + ".manifest.json"));
    CHECK(first.find("orbit_id") == 0);

    fs::remove(out);
    r = run_cli("--manifest " + out.string() + ".manifest.json");
    REQUIRE(r.code == 0);
    CHECK(slurp(out) == first);
    CHECK(slurp(fs::path(out.string() + ".manifest.json")) == manifest);
}

TEST_CASE("simulate writes a trajectory table") {
    fs::path out = sandbox() / "traj.csv";
    auto r = run_cli("simulate --system oscillator --alpha 1 --kinetic classical --q0 1 0 "
                     "--p0 0 0.5 --tend 10 --samples 5 --out " +
                     out.string());
    REQUIRE(r.code == 0);
    std::string csv = slurp(out);
    CHECK(csv.find("t,q1,q2,p1,p2,u,energy,casimir") == 0);
    // header + start + 5 samples + end
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}

TEST_CASE("svg output is emitted for sections") {
    fs::path out = sandbox() / "sect.svg";
    auto r = run_cli("poincare --system oscillator --alpha 0.5 --kinetic classical --denergy 2 "
                     "--orbits 2 --tend 40 --format svg --out " +
                     out.string());
    REQUIRE(r.code == 0);
    std::string svg = slurp(out);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("poincare rejects infeasible energies") {
    auto r = run_cli("poincare --system oscillator --alpha 1 --kinetic rel --energy 0.5 "
                     "--orbits 2 --tend 10");
    CHECK(r.code == 2);
}

TEST_CASE("orbit parallelism does not change the output bytes") {
    fs::path dir = sandbox();
    fs::path a = dir / "serial.csv", b = dir / "parallel.csv";
    std::string base = "poincare --system oscillator --alpha 0.5 --kinetic rel --denergy 3 "
                       "--orbits 4 --tend 80 --out ";
    auto r1 = run_cli(base + a.string());
    REQUIRE(r1.code == 0);
    fs::path out = fs::temp_directory_path() / "relint_cli_capture.txt";
    std::string cmd = "RELINT_THREADS=4 " + std::string(RELINT_CLI_PATH) + " " + base +
                      b.string() + " > " + out.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("highly relativistic oscillator section smoke run") {
    fs::path out = sandbox() / "aniso.csv";
    auto r = run_cli("poincare --system oscillator --alpha 0.5 --kinetic rel --denergy 58 "
                     "--orbits 3 --tend 150 --abs-tol 1e-12 --rel-tol 1e-12 --out " +
                     out.string());
    REQUIRE(r.code == 0);
    std::string csv = slurp(out);
    // at least one crossing per orbit
    for (const char* id : {"\n0,", "\n1,", "\n2,"})
        CHECK(csv.find(id) != std::string::npos);
}

TEST_CASE("radial potential: continuum point, passing verdict") {
    auto v = write_file("radial.json",
                        R"({"n":2,"k":4,"monomials":[{"c":[1,0],"e":[4,0]},
                            {"c":[2,0],"e":[2,2]},{"c":[1,0],"e":[0,4]}]})");
    auto r = run_cli("check --potential " + v.string() + " --format json");
    CHECK(r.code == 0);
    CHECK(r.output.find("\"continuum\": true") != std::string::npos);
    CHECK(r.output.find("passes-necessary-conditions") != std::string::npos);
}
