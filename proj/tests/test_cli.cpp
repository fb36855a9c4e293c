#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(DTQ_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string(P_tmpdir) + "/dtq_test_" + name;
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
    return path;
}

const char* kKronecker2 = R"({"vertices": ["a", "b"], "arrows": [[0, 2], [0, 0]]})";
const char* kSimples =
    R"({"invariants": [{"gamma": [1, 0], "omega_star": 1},
                       {"gamma": [0, 1], "omega_star": 1}]})";
const char* kWorkedFace =
    R"({"tree": [[1, 2], 3],
        "parts": [[1, 0], [0, 1], [0, 1]],
        "skew_form": [[0, 2], [-2, 0]]})";

using Json = nlohmann::json;

}  // namespace

TEST_CASE("coeff computes F coefficients") {
    std::string quiver = write_temp("k2.json", kKronecker2);
    RunResult pair = run("coeff --quiver " + quiver + " --parts \"1,0;0,1\" --theta \"1,-1\"");
    CHECK(pair.exit_code == 0);
    CHECK(Json::parse(pair.out)["F_total"] == 2);

    RunResult triple = run("coeff --quiver " + quiver +
                           " --parts \"1,0;0,1;0,1\" --theta \"2,-1\" --per-tree");
    CHECK(triple.exit_code == 0);
    Json j = Json::parse(triple.out);
    CHECK(j["F_total"] == 4);
    REQUIRE(j["trees"].size() == 1);
    CHECK(j["trees"][0]["F"] == 4);
    CHECK(j["trees"][0]["k_rho"] == 2);
    CHECK(j["trees"][0]["N_toric"] == "2");
}

TEST_CASE("coeff rejects malformed input with exit code 2") {
    std::string quiver = write_temp("k2.json", kKronecker2);
    CHECK(run("coeff --quiver " + quiver + " --parts \"1,x;0,1\" --theta \"1,-1\"").exit_code == 2);
    CHECK(run("coeff --quiver /nonexistent.json --parts \"1,0\" --theta \"1,-1\"").exit_code == 2);
    CHECK(run("coeff --quiver " + quiver + " --parts \"1,0;0,1\"").exit_code == 2);
}

TEST_CASE("dt reconstructs Kronecker invariants") {
    std::string quiver = write_temp("k2.json", kKronecker2);
    std::string att = write_temp("att.json", kSimples);
    RunResult one = run("dt --quiver " + quiver + " --gamma \"1,1\" --theta \"1,-1\" --attractor " + att);
    CHECK(one.exit_code == 0);
    Json j1 = Json::parse(one.out);
    CHECK(j1["omega"] == 2);
    CHECK(j1["omega_bar"] == "2");

    RunResult two = run("dt --quiver " + quiver + " --gamma \"1,2\" --theta \"2,-1\" --attractor " + att);
    CHECK(two.exit_code == 0);
    Json j2 = Json::parse(two.out);
    CHECK(j2["omega"] == 1);
    CHECK(j2["decompositions"].size() >= 2);

    // theta must pair to zero with gamma
    RunResult bad = run("dt --quiver " + quiver + " --gamma \"1,1\" --theta \"1,1\" --attractor " + att);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("tropmult reports the worked face multiplicities") {
    std::string face = write_temp("face.json", kWorkedFace);
    RunResult res = run("tropmult --face " + face);
    CHECK(res.exit_code == 0);
    Json j = Json::parse(res.out);
    CHECK(j["N_trop"] == 2);
    CHECK(j["k_sigma"] == 2);
    CHECK(j["product_formula"] == "4");
    CHECK(j["psi_coker"] == 2);
}

TEST_CASE("selfcheck passes") {
    RunResult res = run("selfcheck --max-r 4 --max-d 3 --cases 25 --seed 1");
    CHECK(res.exit_code == 0);
    CHECK(Json::parse(res.out)["status"] == "ok");
}

TEST_CASE("render writes an SVG group per tree") {
    std::string quiver = write_temp("k2.json", kKronecker2);
    std::string svg_path = std::string(P_tmpdir) + "/dtq_test_render.svg";
    RunResult res = run("render --quiver " + quiver +
                        " --parts \"1,0;0,1;0,1\" --theta \"2,-1\" --svg " + svg_path);
    CHECK(res.exit_code == 0);
    Json j = Json::parse(res.out);
    CHECK(j["trees"] == 1);
    std::ifstream svg(svg_path);
    REQUIRE(svg.good());
    std::string content((std::istreambuf_iterator<char>(svg)),
                        std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("id=\"tree0\"") != std::string::npos);
    CHECK(content.find("id=\"tree1\"") == std::string::npos);
}

TEST_CASE("identical invocations are byte identical") {
    std::string quiver = write_temp("k2.json", kKronecker2);
    std::string cmd = "coeff --quiver " + quiver +
                      " --parts \"1,0;0,1;0,1\" --theta \"2,-1\" --per-tree --seed 3";
    RunResult a = run(cmd);
    RunResult b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}
