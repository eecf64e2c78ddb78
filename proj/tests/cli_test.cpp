#include "cli.hpp"

#include "crisisflow/corpus.hpp"
#include "crisisflow/event_log.hpp"
#include "crisisflow/net.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

using namespace crisisflow;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               (std::string("crisisflow-cli-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        plan_ = path("hcmc.json");
        fixture_ = path("fixture.csv");
        std::ofstream(plan_) << serialize_plan(corpus::builtin_plan());
        std::ofstream(fixture_) << write_csv(corpus::fixture_log());
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::string plan_, fixture_;
};

} // namespace

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"simulate", plan_}).code, cli::kExitUsage);
    EXPECT_EQ(run({"simulate", plan_, "--cases", "two", "--seed", "1"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"serve", "--port", "0"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, PlanValidate) {
    Result ok = run({"plan", "validate", plan_});
    EXPECT_EQ(ok.code, cli::kExitOk);
    EXPECT_NE(ok.out.find("valid: true"), std::string::npos);

    Plan broken = corpus::builtin_plan();
    broken.flows.push_back({"T20", "T99"});
    std::ofstream(path("broken.json")) << serialize_plan(broken);
    Result bad = run({"plan", "validate", path("broken.json")});
    EXPECT_EQ(bad.code, cli::kExitViolation);
    EXPECT_NE(bad.out.find("valid: false"), std::string::npos);
    EXPECT_NE(bad.out.find("T99"), std::string::npos);

    std::ofstream(path("garbage.json")) << "{";
    Result garbage = run({"plan", "validate", path("garbage.json")});
    EXPECT_EQ(garbage.code, cli::kExitViolation);
    EXPECT_NE(garbage.err.find("syntax_error"), std::string::npos);
    EXPECT_EQ(run({"plan", "validate", path("absent.json")}).code, cli::kExitViolation);
}

TEST_F(CliTest, PlanSoundness) {
    Result r = run({"plan", "soundness", plan_});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("sound: true"), std::string::npos);
    EXPECT_NE(r.out.find("dead_transitions: 0"), std::string::npos);
    Result capped = run({"plan", "soundness", plan_, "--cap", "10"});
    EXPECT_EQ(capped.code, cli::kExitViolation);
    EXPECT_NE(capped.err.find("state_space_exceeded"), std::string::npos) << capped.err;
}

TEST_F(CliTest, SimulateIsDeterministic) {
    ASSERT_EQ(run({"simulate", plan_, "--cases", "2", "--seed", "7", "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(run({"simulate", plan_, "--cases", "2", "--seed", "7", "--out", path("b.csv")}).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(read_csv(slurp(path("a.csv"))).traces.size(), 2u);

    ASSERT_EQ(run({"simulate", plan_, "--cases", "2", "--seed", "7", "--out", path("a.xes")}).code, 0);
    EXPECT_EQ(read_xes(slurp(path("a.xes"))).traces, read_csv(slurp(path("a.csv"))).traces);

    Result stdout_run = run({"simulate", plan_, "--cases", "2", "--seed", "7"});
    EXPECT_EQ(stdout_run.out, slurp(path("a.csv")));
}

TEST_F(CliTest, MineAlpha) {
    Result r = run({"mine", "alpha", fixture_, "--out", path("net.json")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("transitions: 24"), std::string::npos);
    WorkflowNet net = read_net_json(slurp(path("net.json")));
    EXPECT_EQ(net.visible_count(), 24u);
}

TEST_F(CliTest, MineFootprint) {
    Result r = run({"mine", "footprint", fixture_});
    EXPECT_EQ(r.code, cli::kExitOk);
    EXPECT_NE(r.out.find("T1"), std::string::npos);
    EXPECT_NE(r.out.find("||"), std::string::npos);
}

TEST_F(CliTest, MineHandover) {
    Result r = run({"mine", "handover", fixture_, "--out", path("net.dot")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    std::string dot = slurp(path("net.dot"));
    std::smatch m;
    ASSERT_TRUE(std::regex_search(dot, m, std::regex("\"A1\" -> \"A2\" \\[label=\"(\\d+)\"")));
    EXPECT_EQ(m[1], "4");
    EXPECT_NE(r.out.find("max_degree: A3"), std::string::npos);
    EXPECT_EQ(dot.find("\"A3\" -> \"A3\""), std::string::npos);

    ASSERT_EQ(run({"mine", "handover", fixture_, "--out", path("loops.dot"), "--include-self-loops"}).code, 0);
    EXPECT_NE(slurp(path("loops.dot")).find("\"A3\" -> \"A3\""), std::string::npos);
}

TEST_F(CliTest, Replay) {
    Result ok = run({"replay", plan_, fixture_});
    EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("fitness: 1"), std::string::npos);

    ASSERT_EQ(run({"mine", "alpha", fixture_, "--out", path("net.json")}).code, 0);
    Result mined = run({"replay", path("net.json"), fixture_});
    EXPECT_EQ(mined.code, cli::kExitViolation);
    EXPECT_NE(mined.out.find("fitness: 0.8"), std::string::npos) << mined.out;

    std::ofstream(path("bad.csv")) << "case_id,activity\n";
    Result bad = run({"replay", plan_, path("bad.csv")});
    EXPECT_EQ(bad.code, cli::kExitViolation);
    EXPECT_FALSE(bad.err.empty());
}

TEST_F(CliTest, CorpusExport) {
    ASSERT_EQ(run({"corpus", "plan", "--out", path("p.json")}).code, 0);
    EXPECT_EQ(parse_plan(slurp(path("p.json"))), corpus::builtin_plan());
    Result fixture = run({"corpus", "fixture"});
    EXPECT_EQ(fixture.out, write_csv(corpus::fixture_log()));
}
