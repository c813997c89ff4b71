#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mls/io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = "\"" + std::string(MLS_CLI_PATH) + "\" " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mls_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string at(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, FactsTable) {
    EXPECT_EQ(run("facts --out " + at("facts.txt")), 0);
    const auto text = slurp(dir_ / "facts.txt");
    EXPECT_NE(text.find("boundary"), std::string::npos);
    EXPECT_EQ(run("facts --json --alpha 4 --out " + at("facts.json")), 0);
    EXPECT_NO_THROW(mls::parse_json(slurp(dir_ / "facts.json")));
}

TEST_F(Cli, K4HasNoColoring) { EXPECT_EQ(run("gen k4 | \"" + std::string(MLS_CLI_PATH) + "\" color > /dev/null"), 1); }

TEST_F(Cli, CompactPipelineVerifies) {
    ASSERT_EQ(run("gen c3 --out " + at("d.json")), 0);
    ASSERT_EQ(run("reduce --compact --scale 2 --in " + at("d.json") + " --out " + at("r.json")), 0);
    ASSERT_EQ(run("color --in " + at("r.json") + " --out " + at("c.json")), 0);
    ASSERT_EQ(run("schedule --in " + at("c.json") + " --out " + at("s.json")), 0);
    EXPECT_EQ(run("verify --in " + at("s.json") + " --out " + at("v.json")), 0);
    const auto v = mls::parse_json(slurp(dir_ / "v.json"));
    EXPECT_TRUE(v.contains("reports"));
    EXPECT_EQ(run("render --in " + at("s.json") + " --svg " + at("s.svg")), 0);
    EXPECT_NE(slurp(dir_ / "s.svg").find("<svg"), std::string::npos);
}

TEST_F(Cli, Errors) {
    EXPECT_EQ(run("frobnicate 2> /dev/null"), 2);
    EXPECT_EQ(run("gen petersen 2> /dev/null"), 2);
    {
        std::ofstream out(dir_ / "bad.json");
        out << "{\"nodes\": [";
    }
    EXPECT_EQ(run("color --in " + at("bad.json") + " 2> /dev/null"), 2);
}
