#include "doctest.h"

#include "crnsign/cli.hpp"
#include "crnsign/graphio.hpp"
#include "crnsign/report.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace crnsign;
using testing::source_path;
using Json = report::Json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fixture(const char *name) { return source_path(std::string("fixtures/") + name + ".crn"); }

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("crnsign_test_" + name)).string();
}

} // namespace

TEST_CASE("analyze reports the classes and ambiguous entries of the two-class network") {
    Result r = run({"analyze", fixture("two_classes")});
    REQUIRE(r.code == 0);
    Json j = r.json();
    for (const char *key : {"network", "signcheck", "badclasses", "kernels", "deficiency"})
        CHECK(j.contains(key));
    CHECK(j["badclasses"].size() == 2);
    CHECK(j["signcheck"]["ambiguous_entries"] == Json::parse(R"([["C","D"],["D","C"]])"));
    CHECK(j["signcheck"]["jacobian_status"][2][3] == "?");
    CHECK(j["network"]["stoichiometry_exact"][3][4] == "2");
    CHECK(j["deficiency"]["complexes"][0] == "A+B");
    CHECK(run({"analyze", fixture("two_classes"), "--check"}).code == 1);
    CHECK(run({"analyze", fixture("signed_jacobian"), "--check"}).code == 0);
}

TEST_CASE("identical input, flags and seed give byte-identical reports") {
    for (const char *cmd : {"analyze", "spectra"}) {
        auto a = run({cmd, fixture("delta_step"), "--seed", "5"});
        auto b = run({cmd, fixture("delta_step"), "--seed", "5"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("signfix writes a network that parses to the fixed matrix") {
    const std::string out = temp_path("fixed.crn");
    Result r = run({"signfix", fixture("two_classes"), "-o", out, "--check"});
    REQUIRE(r.code == 0);
    Network fixed = parse_network(testing::read_text(out));
    CHECK(stoichiometric_matrix(fixed) ==
          rational_matrix({{-1, -1, 0, 0, 0, 0, 0, 0},
                           {-1, 0, 1, -1, 0, 0, 0, 0},
                           {0, -1, -1, 1, -1, 0, 0, 1},
                           {0, 0, -1, 1, 0, -2, 2, 0},
                           {0, 0, 0, 0, -1, 1, 0, 0},
                           {1, 0, 0, 0, 0, 0, 0, 0},
                           {0, 1, 0, 0, 0, 0, 0, 0},
                           {0, 0, 0, 0, 1, 0, -1, 0},
                           {0, 0, 0, 0, 0, 1, 0, -1}}));
    Json j = r.json();
    CHECK(j["fixreport"]["steps"].size() == 2);
    CHECK(j["fixreport"]["steps"][0]["stoichiometry_exact"].size() == 8);
    CHECK(j["kernels"]["correspondence"] == Json::parse("[true,true]"));
    CHECK(j["deficiency"]["audit"][1]["dd"] == 1);
    std::remove(out.c_str());

    Result swapped = run({"signfix", fixture("two_classes"), "--order", "2,1"});
    CHECK(swapped.json()["fixreport"]["steps"][0]["added_species"] == "C'");
    CHECK(run({"signfix", fixture("two_classes"), "--order", "1,1"}).code == 2);
    CHECK(run({"signfix", fixture("two_classes"), "--order", "0,1"}).code == 2);
    CHECK(run({"signfix", fixture("two_classes"), "--rate", "-1"}).code == 2);
}

TEST_CASE("input errors exit with 2") {
    const std::string empty = temp_path("empty.crn");
    { std::ofstream(empty).flush(); }
    Result r = run({"analyze", empty});
    CHECK(r.code == 2);
    CHECK(r.err.find("syntax") != std::string::npos);
    CHECK(r.err.find("grammar") != std::string::npos);
    std::remove(empty.c_str());

    CHECK(run({"analyze", temp_path("missing.crn")}).code == 2);
    CHECK(run({"frobnicate", fixture("delta_step")}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"analyze"}).code == 2);
    CHECK(run({"analyze", fixture("delta_step"), "--json", "--plain"}).code == 2);
    CHECK(run({"spectra", fixture("delta_step"), "--k-grid", "1:10"}).code == 2);
    CHECK(run({"spectra", fixture("delta_step"), "--k-grid", "1:100:7"}).code == 2); // < 4 decades
    CHECK(run({"spectra", fixture("delta_step"), "--class", "9"}).code == 2);
    CHECK(run({"equilibria", fixture("delta_step"), "--rates", "1,2"}).code == 2);
    CHECK(run({"equilibria", fixture("delta_step"), "--x0", "1,0,1"}).code == 2);
    CHECK(run({"equilibria", fixture("delta_step"), "--clamp", "Q"}).code == 2);
    Result help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("signfix") != std::string::npos);
}

TEST_CASE("altfix warns and fails its check on the section 5 network") {
    Result r = run({"altfix", fixture("altfix_demo"), "--check"});
    CHECK(r.code == 1);
    CHECK(r.err.find("demonstration") != std::string::npos);
    Json j = r.json();
    CHECK(j["altfix"]["kernel_dim"] == 2);
    CHECK(j["altfix"]["kernel_dim_tilde"] == 1);
    CHECK(j["altfix"]["conserving_tilde"] == false);
}

TEST_CASE("equilibria") {
    Result strict = run({"equilibria", fixture("delta_step"), "--check"});
    CHECK(strict.code == 1);
    CHECK(strict.json()["equilibria"]["lifted"].is_null());
    Result loose = run({"equilibria", fixture("delta_step"), "--allow-boundary", "--check"});
    CHECK(loose.code == 0);
    CHECK(loose.json()["equilibria"]["lifted"]["residual_hat"].get<double>() <= 1e-8);

    const std::string csv = temp_path("traj.csv");
    Result s5 = run({"equilibria", fixture("altfix_demo"), "--clamp", "X2", "--check", "--trajectory", csv,
                     "--t-end", "0.1", "--dt", "0.01"});
    REQUIRE(s5.code == 0);
    Json x = s5.json()["equilibria"]["x_f64"];
    const double expect[] = {0.5, 1.0, 4.0, 0.5};
    for (int i = 0; i < 4; ++i)
        CHECK(x[i].get<double>() == doctest::Approx(expect[i]).epsilon(1e-9));
    std::string traj = testing::read_text(csv);
    CHECK(traj.rfind("t,X1,X2,X3,X4\n", 0) == 0);
    CHECK(std::count(traj.begin(), traj.end(), '\n') == 12);
    std::remove(csv.c_str());
}

TEST_CASE("spectra") {
    Result r = run({"spectra", fixture("delta_step"), "--check"});
    REQUIRE(r.code == 0);
    Json s = r.json()["spectra"];
    CHECK(s["per_k"].size() == 7);
    CHECK(s["per_k"][6]["k"] == 1e6);
    CHECK(s["per_k"][6]["eig_j_hat"].size() == 4);
    CHECK(s["slope"].get<double>() <= -0.8);
    CHECK(s["h_degree"]["pass"] == true);
    Result none = run({"spectra", fixture("signed_jacobian"), "--check"});
    CHECK(none.code == 1);
    CHECK(none.json()["spectra"].is_null());
}

TEST_CASE("graph and decompose") {
    const std::string dot = temp_path("g.dot");
    Result g = run({"graph", fixture("two_classes"), "-o", dot, "--check"});
    CHECK(g.code == 1); // two bad cycles
    CHECK(g.json()["graph"]["bad_cycles"].size() == 2);
    CHECK(testing::read_text(dot) == export_dot(build_graph(testing::load_fixture("two_classes"))));
    std::remove(dot.c_str());
    CHECK(run({"graph", fixture("two_classes"), "--fixed", "--check"}).code == 0);
    Result plain = run({"graph", fixture("delta_step"), "--plain"});
    CHECK(plain.out.rfind("digraph SR {", 0) == 0);

    Result d = run({"decompose", fixture("delta_step"), "--check", "--rates", "1,2,3"});
    CHECK(d.code == 0);
    CHECK(d.json()["decomposition"]["complexes"] == Json::parse(R"(["2A","3B+C","A+B","C"])"));
}

TEST_CASE("deficiency subcommand") {
    CHECK(run({"deficiency", fixture("unsigned_jacobian"), "--check"}).code == 0);
    Result r = run({"deficiency", fixture("signed_jacobian"), "--check"});
    CHECK(r.code == 1);
    CHECK(r.json()["deficiency"]["delta"] == 1);
    Result p = run({"deficiency", fixture("complex_bounds"), "--plain"});
    CHECK(p.out.find("step 1: dn 3, dl 2") != std::string::npos);
}

TEST_CASE("report file option") {
    const std::string path = temp_path("report.json");
    Result r = run({"analyze", fixture("delta_step"), "--report", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(Json::parse(testing::read_text(path))["badclasses"].size() == 3);
    std::remove(path.c_str());
}
