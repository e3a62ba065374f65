#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RELUNIF_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_file(const std::string& name, const std::string& body) {
    const std::string path = std::string(TEST_TMP_DIR) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("prove and countermodel") {
    auto r = run("prove 'x -> x'");
    CHECK(r.code == 0);
    CHECK(r.out.find("theorem") == 0);
    CHECK(run("prove 'x | ~x'").code == 1);
    CHECK(run("countermodel 'x | ~x'").code == 0);
    CHECK(run("countermodel 'x -> x'").code == 1);
    auto j = nlohmann::json::parse(run("prove 'x | ~x' --json").out);
    CHECK(j["theorem"] == false);
    CHECK(j["countermodel"]["nodes"].size() == 2);
}

TEST_CASE("star and equiv") {
    auto r = run("star '~~x'");
    CHECK(r.code == 0);
    CHECK(r.out == "false\n");
    CHECK(run("equiv '~x -> x' '~~x'").code == 0);
    CHECK(run("equiv x y").code == 1);
}

TEST_CASE("projectivity commands") {
    CHECK(run("projective x").code == 0);
    CHECK(run("projective 'x | y'").code == 1);
    auto j = nlohmann::json::parse(run("resolve 'x | y' --json").out);
    CHECK(j["elements"].size() == 2);
    CHECK(run("resolve x --flavor prime-nnilpar").code == 0);
    CHECK(run("resolve x --flavor other").code == 3);
    CHECK(run("glb 'x | y'").out == "x | y\n");
    CHECK(run("dagger false").out == "false\n");
}

TEST_CASE("admissibility commands") {
    CHECK(run("admissible '~x -> (y | z)' '(~x -> y) | (~x -> z)'").code == 0);
    CHECK(run("admissible x y").code == 1);
    CHECK(run("preserve x y").code == 0);
    CHECK(run("preserve '#p' '#q'").code == 1);
    CHECK(run("falsify x y").code == 0);
    CHECK(run("falsify '~x -> (y | z)' '(~x -> y) | (~x -> z)'").code == 2);
}

TEST_CASE("derivation checking") {
    auto h = run("admissible '~x -> (y | z)' '(~x -> y) | (~x -> z)' --json");
    auto d = nlohmann::json::parse(h.out)["derivation"];
    const auto path = temp_file("harrop.json", d.dump());
    CHECK(run("check-derivation --derivation " + path).code == 0);
    CHECK(run("check-derivation --system ARDpar --derivation " + path).code == 0);
    auto bar = run("check-derivation --system BAR --derivation " + path);
    CHECK(bar.code == 1);
    CHECK(bar.out.find("root.premises[0]") != std::string::npos);
    CHECK(run("check-derivation --derivation " + temp_file("junk.json", "{nope")).code == 3);
}

TEST_CASE("enumeration and model commands") {
    auto e = nlohmann::json::parse(run("enumerate --class nnil --atoms '#p' --json").out);
    CHECK(e["count"] == 5);
    CHECK(run("enumerate --class bounded --atoms x --rank 0").out.size() > 0);
    CHECK(run("enumerate --class nnil --atoms x").code == 3);
    const auto m = temp_file("point.json", R"({"nodes":[{"id":0,"atoms":["x"]}]})");
    CHECK(run("chi --model " + m + " --rank 0").out == "x\n");
    CHECK(run("closure --model " + m + " --rank 0").out == "x\n");
    CHECK(run("extendible-class --model " + m).code == 0);
    CHECK(run("model-validate --model " + m + " x").code == 0);
    CHECK(run("model-validate --model " + m + " y").code == 1);
    const auto bad = temp_file("bad.json", R"({"nodes":[{"id":0,"atoms":["x"]},{"id":1,"parent":0,"atoms":[]}]})");
    CHECK(run("model-validate --model " + bad).code == 3);
}

TEST_CASE("input errors and parameters") {
    CHECK(run("prove 'x &'").code == 3);
    CHECK(run("nonsense").code == 3);
    CHECK(run("--par p star p").code == 3);
    CHECK(run("--par p star '#p'").out == "#p\n");
    CHECK(run("--par '#q' star 'x | #q'").out == "#q\n");
    CHECK(run("--budget 0 prove x").code == 3);
    CHECK(run("--jobs 2 prove 'x -> x'").code == 0);
}

TEST_CASE("budget exhaustion is inconclusive") {
    CHECK(run("resolve '~x -> y | z'").code == 2);
}
