#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "scnet/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(std::string const& args)
{
    std::string const cmd = std::string("\"") + SCNET_CLI + "\" " + args + " 2>&1";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) { return r; }
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) { r.out.append(buf.data(), n); }
    int const status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(std::string const& name) { return (fs::path(SCNET_DATA_DIR) / name).string(); }

fs::path scratch()
{
    fs::path dir = fs::path(SCNET_SCRATCH_DIR) / "cli";
    fs::create_directories(dir);
    return dir;
}

void write(fs::path const& p, std::string const& text) { std::ofstream(p) << text; }

} // namespace

TEST(Cli, CheckAcceptsBundledInstances)
{
    for (auto name : {"baseline", "dc_expansion", "network_expansion"}) {
        auto const r = run("check " + fixture(std::string(name) + ".instance.json"));
        EXPECT_EQ(r.code, 0) << r.out;
    }
}

TEST(Cli, CheckReportsProblemsWithExitTwo)
{
    auto doc = scnet::json::parse(scnet::read_file(fixture("baseline.instance.json")));
    doc["utilization"] = 0;
    auto const path = scratch() / "zero_u.json";
    write(path, doc.dump(2));
    auto const r = run("check " + path.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("utilization"), std::string::npos) << r.out;
}

TEST(Cli, MissingFileAndBadArgumentsExitTwo)
{
    EXPECT_EQ(run("check /nonexistent/instance.json").code, 2);
    EXPECT_EQ(run("solve").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("audit " + fixture("table1.csv") + " --scenario nowhere").code, 2);
    EXPECT_EQ(run("audit " + fixture("table3.csv") + " --scenario baseline").code, 2);
}

TEST(Cli, AuditJson)
{
    auto const r = run("audit " + fixture("table2.csv") + " --scenario dc_expansion --json");
    ASSERT_EQ(r.code, 0) << r.out;
    auto const doc = scnet::json::parse(r.out);
    EXPECT_EQ(doc["grand_total_by_rows"], 58558);
    EXPECT_EQ(doc["breaches"].size(), 3u);
}

TEST(Cli, CompareJson)
{
    auto const r = run("compare " + fixture("table1.csv") + " " + fixture("table3.csv") +
                       " --scenario-a baseline --scenario-b network_expansion --json");
    ASSERT_EQ(r.code, 0) << r.out;
    auto const doc = scnet::json::parse(r.out);
    EXPECT_NEAR(doc["percent_of_new"].get<double>(), 56.88, 0.01);
}

TEST(Cli, SolveWritesResultAndTrace)
{
    auto const out = scratch() / "solve.json";
    auto const trace = scratch() / "solve.csv";
    auto const r = run("solve " + fixture("baseline.instance.json") + " --seed 7 --generations 1000 --out " +
                       out.string() + " --trace " + trace.string());
    EXPECT_EQ(r.code, 0) << r.out;
    auto const doc = scnet::load_result(scnet::read_file(out));
    EXPECT_FALSE(doc["best_feasible"].is_null());
    EXPECT_FALSE(fs::exists(out.string() + ".tmp"));
    auto const csv = scnet::read_file(trace);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), doc["generations_run"].get<int>() + 1);
}

TEST(Cli, SolveWithoutFeasiblePlanExitsOne)
{
    auto const path = scratch() / "starved.json";
    auto doc = scnet::json::parse(scnet::read_file(fixture("baseline.instance.json")));
    doc["dc_capacity"] = {1000, 1000, 1000, 1000};
    write(path, doc.dump(2));
    EXPECT_EQ(run("solve " + path.string() + " --generations 5").code, 1);
}

TEST(Cli, OracleExitCodes)
{
    EXPECT_EQ(run("oracle " + fixture("baseline.instance.json")).code, 3);

    scnet::json tiny = {
        {"counts", {{"suppliers", 1}, {"plants", 1}, {"dcs", 1}, {"retailers", 1}}},
        {"supplier_capacity", {20}},
        {"plant_capacity", {20}},
        {"dc_capacity", {20}},
        {"demand", {10}},
        {"raw_unit_cost", {2}},
        {"holding_unit_cost", {1}},
        {"plant_dc_unit_cost", {{3}}},
        {"dc_retailer_unit_cost", {{4}}},
        {"utilization", 1},
    };
    auto const path = scratch() / "tiny.json";
    write(path, tiny.dump(2));
    auto const ok = run("oracle " + path.string());
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("optimum cost: 100.000000"), std::string::npos) << ok.out;

    tiny["dc_capacity"] = {5};
    write(path, tiny.dump(2));
    EXPECT_EQ(run("oracle " + path.string()).code, 1);
    EXPECT_EQ(run("oracle " + path.string() + " --grid 0").code, 2);
}

TEST(Cli, ScenarioEmitMatchesBundledFixtures)
{
    auto const dir = scratch() / "emit";
    for (std::string name : {"baseline", "dc_expansion", "network_expansion"}) {
        ASSERT_EQ(run("scenario " + name + " --emit " + dir.string()).code, 0);
        EXPECT_EQ(scnet::read_file(dir / (name + ".instance.json")), scnet::read_file(fixture(name + ".instance.json")));
    }
    for (std::string table : {"table1.csv", "table2.csv", "table3.csv"}) {
        EXPECT_EQ(scnet::read_file(dir / table), scnet::read_file(fixture(table)));
    }
}
