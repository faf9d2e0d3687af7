#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "glctkit/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kSource = GLCTKIT_SOURCE_DIR;

struct CliRun {
    int code = -1;
    std::string output;  // stdout and stderr combined
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string("\"") + GLCTKIT_CLI_PATH + "\" " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe)) r.output += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("glctkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("select --cycle 8").code, 2);
}

TEST_F(Cli, TransformRoundTrip) {
    const std::string graph = (kSource / "data" / "two_rings.txt").string();
    const std::string signal = (kSource / "data" / "two_rings_signal.csv").string();
    const std::string common = " --graph " + graph + " --alpha 0.7 --beta 3 --chirp 0.5,1";
    ASSERT_EQ(run("transform" + common + " --signal " + signal + " --out " + path("hat.csv")).code, 0);
    ASSERT_EQ(run("transform" + common + " --inverse --signal " + path("hat.csv") + " --out " + path("back.csv")).code, 0);
    const auto x = glctkit::io::read_signal(signal);
    const auto back = glctkit::io::read_signal(path("back.csv"));
    EXPECT_LT((x - back).norm() / x.norm(), 1e-10);
    EXPECT_TRUE(fs::exists(path("hat.csv.manifest.json")));
}

TEST_F(Cli, MissingSignalNamesPath) {
    const CliRun r = run("transform --cycle 8 --signal /no/such/signal.csv --out " + path("o.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("/no/such/signal.csv"), std::string::npos) << r.output;
}

TEST_F(Cli, SignalLengthMismatchIsValidationError) {
    const std::string signal = (kSource / "data" / "two_rings_signal.csv").string();
    EXPECT_EQ(run("transform --cycle 8 --signal " + signal + " --out " + path("o.csv")).code, 2);
}

TEST_F(Cli, OperatorExportWritesSidecar) {
    ASSERT_EQ(run("operator --cycle 6 --alpha 0.5 --out " + path("op.csv")).code, 0);
    EXPECT_TRUE(fs::exists(path("op.csv")));
    const auto meta = nlohmann::json::parse(slurp(path("op.json")));
    EXPECT_EQ(meta["n"], 6);
    EXPECT_TRUE(meta.contains("basis_hash"));
}

TEST_F(Cli, SelectIsDeterministic) {
    const std::string args = "select --cycle 32 --alpha 0.8 --beta 32 --chirp 0.5,1 --bandwidth 4 --samples 8 "
                             "--strategy maxsigmin --out ";
    ASSERT_EQ(run(args + path("a.json")).code, 0);
    ASSERT_EQ(run(args + path("b.json")).code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    const auto j = nlohmann::json::parse(slurp(path("a.json")));
    EXPECT_EQ(j["set"].size(), 8u);
    EXPECT_EQ(j["qualified"], true);
    EXPECT_LT(j["recoverability_margin"].get<double>(), 1.0);
}

TEST_F(Cli, SelectExhaustiveObjective) {
    EXPECT_EQ(run("select --cycle 10 --bandwidth 3 --samples 3 --strategy exhaustive --objective random").code, 2);
    EXPECT_EQ(run("select --cycle 40 --bandwidth 3 --samples 20 --strategy exhaustive").code, 2);
    const CliRun r = run("select --cycle 10 --alpha 0.8 --beta 10 --chirp 0.5,1 --bandwidth 3 --samples 3 "
                      "--strategy exhaustive --objective maxsig");
    EXPECT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("\"set\""), std::string::npos);
}

TEST_F(Cli, SelectTooManySamples) {
    EXPECT_EQ(run("select --cycle 32 --bandwidth 4 --samples 40 --strategy maxsig").code, 2);
}

TEST_F(Cli, MalformedConfig) {
    {
        std::ofstream(path("bad.json")) << "{ \"experiment\": \"sweep\", ";
    }
    const CliRun r = run("experiment --config " + path("bad.json") + " --out " + path("out"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("malformed"), std::string::npos) << r.output;
}

TEST_F(Cli, ExperimentWritesOutputs) {
    const CliRun r = run("experiment --config " + (kSource / "configs" / "region.json").string() + " --out " +
                      path("region"));
    EXPECT_EQ(r.code, 0) << r.output;
    for (const char* f : {"results.csv", "summary.json", "manifest.json", "region.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / "region" / f)) << f;
    }
    EXPECT_NE(r.output.find("PASS"), std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(dir_ / "region" / "manifest.json"));
    EXPECT_TRUE(manifest.contains("config_hash"));
    EXPECT_TRUE(manifest.contains("versions"));
}
