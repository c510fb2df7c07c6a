#include <json.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(WFB_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

} // namespace

TEST(Cli, EnergyOfHemisphere) {
    const auto r = run("energy --id hemisphere --nx 257 --ny 129");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["W"].get<double>(), 2 * std::numbers::pi, 1e-3 * 2 * std::numbers::pi);
    EXPECT_NEAR(j["E"].get<double>(), 2 * std::numbers::pi, 1e-3 * 2 * std::numbers::pi);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["surface"]["scheme"], "analytic");
}

TEST(Cli, TiltedHemisphereViolatesPlaneConstraint) {
    const auto file = tmp("wfb_cli_tilted.json");
    ASSERT_EQ(run("gallery sample --id hemisphere --nx 33 --ny 17 --tilt 0.1 --out " + file.string()).code, 0);
    const auto r = run("reflect --kind plane --surface " + file.string());
    EXPECT_EQ(r.code, 1);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["error"], "ConstraintViolated");
    EXPECT_GT(j["report"]["position_residual"].get<double>(), 0.09);
    std::filesystem::remove(file);
}

TEST(Cli, ReflectMercatorBand) {
    const auto file = tmp("wfb_cli_full.json");
    const auto r = run("reflect --id mercator_sphere --nx 33 --ny 17 --out " + file.string());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["ny"], 33);
    EXPECT_EQ(j["parity"]["f"].get<double>(), 0.0);
    std::ifstream in(file);
    const auto s = json::parse(in);
    EXPECT_EQ(s["positions"].size(), 33u * 33u);
    std::filesystem::remove(file);
}

TEST(Cli, ExtendSingleMode) {
    // phi = cos x with one mode: u = (1 + y) e^{-y} cos x
    const auto file = tmp("wfb_cli_phi.json");
    const std::size_t nx = 65;
    json phi = json::array();
    for (std::size_t i = 0; i < nx; ++i) phi.push_back(std::cos(-std::numbers::pi + 2 * std::numbers::pi * i / (nx - 1)));
    std::ofstream(file) << phi.dump();
    const auto r = run("extend --phi " + file.string() + " --modes 1 --ny 9");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    const auto v = j["values"].get<std::vector<double>>();
    ASSERT_EQ(v.size(), nx * 9);
    for (std::size_t jy = 0; jy < 9; ++jy)
        for (std::size_t i = 0; i < nx; i += 8) {
            const double x = -std::numbers::pi + 2 * std::numbers::pi * i / (nx - 1), y = jy / 8.0;
            EXPECT_NEAR(v[jy * nx + i], (1 + y) * std::exp(-y) * std::cos(x), 1e-12);
        }
    std::filesystem::remove(file);
}

TEST(Cli, ResidualsOnHelicoidLine) {
    const auto r = run("residuals --id helicoid --support line --nx 65 --ny 33");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["asserted"], "navier");
}

TEST(Cli, GalleryList) {
    const auto r = run("gallery list");
    ASSERT_EQ(r.code, 0);
    const auto ids = json::parse(r.out).get<std::vector<std::string>>();
    EXPECT_EQ(ids.size(), 8u);
    EXPECT_EQ(ids.front(), "mercator_sphere");
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("energy --nx 3").code, 2);
    EXPECT_EQ(run("residuals --support cone").code, 2);
    EXPECT_EQ(run("converge --quantity nothing --ladder 17x9,33x17,65x33").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, DomainErrorsExitOne) {
    const auto r = run("energy --id torus");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.out)["error"], "InvalidArgument");
}

TEST(Cli, ConvergeParity) {
    const auto r = run("converge --quantity hemisphere-W --ladder 33x17,65x33,129x65");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_GT(j["rows"][2]["order"].get<double>(), 1.9);
}
