#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(CANON_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name)
{
    return std::string(CANON_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("measure command succeeds and reports agreement", "[cli]")
{
    const Run r = run("measure --input " + data("theta.json") + " --formulation all");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["agree"] == true);
    CHECK(j["results"]["matrix"]["edges"]["e1"]["exact"] == "2/3");
}

TEST_CASE("table output", "[cli]")
{
    const Run r = run("measure --input " + data("theta.json") + " --table");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("agree: true") != std::string::npos);
    CHECK(r.out.find('{') == std::string::npos);
}

TEST_CASE("parse failures exit with code 2", "[cli]")
{
    CHECK(run("measure --input " + data("bad_rational.json")).code == 2);
    CHECK(run("measure --input " + data("missing.json")).code == 2);
    CHECK(run("measure").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("measure --input " + data("theta.json") + " --formulation nope").code == 2);
    CHECK(run("limit --input " + data("theta_family.json") + " --grid 0").code == 2);
}

TEST_CASE("precondition failures exit with code 3", "[cli]")
{
    CHECK(run("minors --input " + data("uncovered_layering.json")).code == 3);
    const Run bad = run("limit --input " + data("nonconvergent_family.json"));
    CHECK(bad.code == 3);
    CHECK(nlohmann::json::parse(bad.out)["violations"][0]["condition"] == "conv3");
    CHECK(run("measure --input " + data("nonconvergent_family.json")).code == 3);
}

TEST_CASE("failed assertions exit with code 4", "[cli]")
{
    CHECK(run("limit --input " + data("theta_family.json") + " --grid 2 --tolerance 1e-9").code == 4);
    CHECK(run("limit --input " + data("theta_family.json") + " --tolerance 1e-5").code == 0);
}

TEST_CASE("remaining commands succeed on bundled data", "[cli]")
{
    CHECK(run("minors --input " + data("k3.json")).code == 0);
    CHECK(run("trees --input " + data("k3.json")).code == 0);
    CHECK(run("limit --input " + data("k3_family.json")).code == 0);
    CHECK(run("periods --input " + data("theta_family.json") + " --lambda0 " + data("theta_lambda0.json")).code == 0);
    CHECK(run("periods --input " + data("pad_only.json") + " --lambda0 " + data("pad_only_lambda0.json")).code == 0);
}

TEST_CASE("selftest is deterministic", "[cli]")
{
    const Run a = run("selftest --seed 7");
    const Run b = run("selftest --seed 7");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out)["all_passed"] == true);
}
