#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polybound/formula.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace polybound;

namespace {

const std::string kCli = POLYBOUND_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    fs::path tmp = fs::temp_directory_path() / "polybound_cli_out.txt";
    std::string cmd = kCli + " " + args + " > " + tmp.string() + " 2>&1";
    int raw = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(raw), ss.str()};
}

fs::path write_tmp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("qe subcommand on the quadratic positivity query") {
    fs::path f = write_tmp("cli_qe1.txt", "A x. (a2*x^2 + a1*x + a0 > 0)\n");
    RunResult r = run("qe " + f.string());
    REQUIRE(r.exit_code == 0);
    // Output line must parse and agree with the known characterization on a
    // sample of coefficient triples.
    FormulaRef ours = parse_formula(r.out.substr(0, r.out.find('\n')));
    FormulaRef known =
        parse_formula("(a1 = 0 | 4*a2*a0 - a1^2 != 0) & (a0 > 0) & (-4*a2*a0 + a1^2 <= 0)");
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<int> c(-10, 10);
    for (int i = 0; i < 500; ++i) {
        std::map<VarId, Rational> at{
            {var("a0"), c(gen)}, {var("a1"), c(gen)}, {var("a2"), c(gen)}};
        CHECK(eval_ground(ours, at) == eval_ground(known, at));
    }
}

TEST_CASE("qe subcommand trivial and failure paths") {
    fs::path t = write_tmp("cli_qe2.txt", "true\n");
    RunResult r = run("qe " + t.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 4) == "true");

    fs::path cubic = write_tmp("cli_qe3.txt", "E x. (x^3 + a0 = 0)\n");
    RunResult rc = run("qe " + cubic.string());
    CHECK(rc.exit_code == 2);
    CHECK(rc.out.find("degree") != std::string::npos);
}

TEST_CASE("bound subcommand closed forms") {
    RunResult r = run("bound --candidate sphere-fixed --json /dev/null");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["c"].get<double>() == doctest::Approx(39.246).epsilon(1e-4));
    CHECK(j["certificate"] == "closed-form");
    CHECK(j["x30"].get<double>() == doctest::Approx(38.0));

    RunResult re = run("bound --candidate ellipse-fixed");
    REQUIRE(re.exit_code == 0);
    json je = json::parse(re.out);
    CHECK(je["c"].get<double>() == doctest::Approx(182.895).epsilon(1e-5));
}

TEST_CASE("bound subcommand center minimization") {
    RunResult r = run("bound --candidate ellipse-center --minimize");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["x30"].get<double>() == doctest::Approx(52.553).epsilon(0.01 / 52.0));
    CHECK(j["c"].get<double>() == doctest::Approx(176.531).epsilon(0.01 / 176.0));
    CHECK(j["certificate"] == "biquadratic");
}

TEST_CASE("bound subcommand bisection on a custom ellipsoid") {
    RunResult r = run(
        "bound --candidate custom --p 1 1.62 1.62 --x30 32.83 --method bisection "
        "--c-lo 30 --c-hi 60 --tol 1/100");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["c"].get<double>() == doctest::Approx(43.956).epsilon(0.02 / 43.9));
    CHECK(j["volume"].get<double>() == doctest::Approx(2.196e5).epsilon(0.005));
    CHECK(j["certificate"] == "bisection");
}

TEST_CASE("plot subcommand draws a circle for a single sphere") {
    fs::path jpath = fs::temp_directory_path() / "cli_bound.json";
    RunResult rb = run("bound --candidate sphere-fixed --json " + jpath.string());
    REQUIRE(rb.exit_code == 0);
    fs::path svg = fs::temp_directory_path() / "cli_plot.svg";
    RunResult rp = run("plot " + jpath.string() + " --plane x1x2 --svg " + svg.string());
    CHECK(rp.exit_code == 0);
    std::ifstream in(svg);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("<ellipse") != std::string::npos);
    CHECK(ss.str().find("</svg>") != std::string::npos);
}

TEST_CASE("montecarlo subcommand rejects an empty run") {
    RunResult r = run("montecarlo --n 0");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("empty") != std::string::npos);
}

TEST_CASE("verify subcommand reports invariance") {
    RunResult r = run("verify --p 1 1 1 --x30 38 --c 39.25 --starts 20");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["invariant"] == true);

    RunResult rf = run("verify --p 1 1 1 --x30 38 --c 19 --starts 10");
    CHECK(rf.exit_code == 1);
}
