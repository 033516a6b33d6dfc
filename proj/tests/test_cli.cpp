#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    std::string cmd = std::string(ROOTBRANCH_CLI) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("rootbranch_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, MonicSqrtCompletes) {
    fs::path dir = scratch("sqrt");
    CliRun r = run("--fixture monic-sqrt --out " + dir.string());
    EXPECT_EQ(r.code, 0) << r.out;
    std::ifstream csv(dir / "branch.csv");
    std::string line;
    std::size_t rows = 0;
    double max_res = 0.0;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        ++rows;
        max_res = std::max(max_res, std::stod(line.substr(line.rfind(',') + 1)));
    }
    EXPECT_GE(rows, 1000u);
    EXPECT_LE(max_res, 1e-8);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j["status"], "Completed");
    EXPECT_EQ(j["exit_code"], 0);
}

TEST(Cli, CounterexampleExitsTwo) {
    fs::path dir = scratch("ce");
    CliRun r = run("--fixture counterexample-x2z-x --out " + dir.string());
    EXPECT_EQ(r.code, 2) << r.out;
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j["status"], "AsymptoticBlowup");
    EXPECT_LT(j["status_location"]["x"].get<double>(), 1e-3);
}

TEST(Cli, Example1ExitsFourWithDegenerateEndpoint) {
    fs::path dir = scratch("ex1");
    CliRun r = run("--fixture example1-sin --out " + dir.string());
    EXPECT_EQ(r.code, 4) << r.out;
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "summary.json"));
    auto& deg = j["diagnostics"]["degenerate_endpoints"];
    ASSERT_EQ(deg.size(), 1u);
    EXPECT_EQ(deg[0]["x"], 0.0);
    EXPECT_EQ(deg[0]["status"], "DegenerateBarrier");
}

TEST(Cli, ProblemFileAndSeedInvalid) {
    fs::path dir = scratch("file");
    fs::create_directories(dir);
    std::ofstream(dir / "p.problem") << "function = z^2 - x\nseed = 0.25; 3\n";
    CliRun r = run("--problem " + (dir / "p.problem").string() + " --out " + dir.string());
    EXPECT_EQ(r.code, 5) << r.out;
}

TEST(Cli, UsageAndParseErrorsExitOne) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("--fixture monic-sqrt --problem x").code, 1);
    EXPECT_EQ(run("--bogus").code, 1);
    EXPECT_EQ(run("--fixture no-such-fixture --out " + scratch("none").string()).code, 1);
    fs::path dir = scratch("bad");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.problem") << "function = z +\nseed = 0; 0\n";
    CliRun r = run("--problem " + (dir / "bad.problem").string() + " --out " + dir.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("line 1"), std::string::npos) << r.out;
    EXPECT_EQ(run("--problem " + (dir / "missing.problem").string()).code, 1);
}

TEST(Cli, ListFixtures) {
    CliRun r = run("--list-fixtures");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("example2-phi\tAsymptoticBlowup"), std::string::npos);
    EXPECT_NE(r.out.find("monic-cubic-ytree\tCompleted"), std::string::npos);
    std::istringstream in(r.out);
    std::vector<std::string> names;
    for (std::string line; std::getline(in, line);) names.push_back(line.substr(0, line.find('\t')));
    EXPECT_EQ(names.size(), 8u);
    EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST(Cli, SamplesOverride) {
    fs::path dir = scratch("samples");
    CliRun r = run("--fixture monic-cubic-interval --samples 50 --out " + dir.string());
    EXPECT_EQ(r.code, 0);
    std::ifstream csv(dir / "branch.csv");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 1u + 51u);
}
