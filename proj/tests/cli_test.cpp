#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cstdlib>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "vdg/graph_io.hpp"
#include "vdg/service.hpp"

namespace vdg {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string output;  // stdout and stderr
};

CliRun run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(VDG_CLI) + " " + args + " 2>&1";
  if (!stdin_text.empty()) cmd = "printf '" + stdin_text + "' | " + cmd;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int raw_status = pclose(pipe);
  r.status = WIFEXITED(raw_status) ? WEXITSTATUS(raw_status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vdg_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, BuildGadgetReportsFiveInvariants) {
  const CliRun r = run("build-gadget --group C3 -o " + path("g.json"));
  ASSERT_EQ(r.status, 0) << r.output;
  const json doc = json::parse(slurp(path("g.json")));
  EXPECT_EQ(doc["verified"], true);
  ASSERT_EQ(doc["invariants"].size(), 5u);
  for (const json& c : doc["invariants"]) EXPECT_EQ(c["passed"], true) << c.dump();
  EXPECT_EQ(doc["graph"]["vertices"].size(), 109u);
  EXPECT_EQ(doc["orbit"].size(), 3u);
}

TEST_F(CliTest, SkipVerifyMarksOutput) {
  const CliRun r = run("build-gadget --group S3 --skip-verify -o " + path("g.json"));
  ASSERT_EQ(r.status, 0) << r.output;
  const json doc = json::parse(slurp(path("g.json")));
  EXPECT_EQ(doc["verified"], false);
  EXPECT_TRUE(doc["invariants"].empty());
  EXPECT_EQ(doc["graph"]["vertices"].size(), 721u);
}

TEST_F(CliTest, VerifyExhaustive) {
  const CliRun r = run("--json verify-exhaustive --groups C2,C3,C2xC2 --rounds 2");
  ASSERT_EQ(r.status, 0) << r.output;
  const json doc = json::parse(r.output);
  EXPECT_EQ(doc["sequences"].size(), 4u);
  EXPECT_EQ(doc["all_passed"], true);
}

TEST_F(CliTest, BadIndexExitsNonzero) {
  ASSERT_EQ(run("build-game --groups C2,C3 --rounds 1 -o " + path("game.json")).status, 0);
  const CliRun r = run("play --game " + path("game.json") + " --challenges 9");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("bad index"), std::string::npos) << r.output;
  EXPECT_EQ(json::parse(slurp(path("game.json")))["moves"].size(), 0u);
}

TEST_F(CliTest, InteractivePlayThenReplay) {
  ASSERT_EQ(run("build-game --groups C2,C3,C2xC2 --rounds 2 -o " + path("game.json")).status, 0);
  const CliRun first = run("play --game " + path("game.json"), "7\\nx\\n2\\n");
  ASSERT_EQ(first.status, 0) << first.output;
  EXPECT_NE(first.output.find("bad index 7"), std::string::npos);
  EXPECT_NE(first.output.find("|Aut| = 4, verified"), std::string::npos) << first.output;
  EXPECT_EQ(json::parse(slurp(path("game.json")))["moves"].size(), 1u);

  const CliRun second = run("play --game " + path("game.json") + " --challenges 1 --graph-out " + path("g.json"));
  ASSERT_EQ(second.status, 0) << second.output;
  EXPECT_NE(second.output.find("round 2: challenge 1 (C3)"), std::string::npos) << second.output;
  const json t = json::parse(slurp(path("game.json")));
  ASSERT_EQ(t["moves"].size(), 2u);
  EXPECT_EQ(t["moves"][1]["aut_order"], 3);

  const CliRun over = run("play --game " + path("game.json") + " --challenges 1");
  EXPECT_EQ(over.status, 2);
  EXPECT_NE(over.output.find("finished"), std::string::npos);
}

TEST_F(CliTest, ApiAndCliGraphsAreByteIdentical) {
  GameService svc;
  const json created = json::parse(svc.handle({"POST", "/games", {}, R"({"groups":["C2","C3"],"rounds":1})"}).body);
  const std::string id = created["session"];
  svc.handle({"POST", "/games/" + id + "/challenge", {}, R"({"group_index":1})"});
  const std::string api_graph = svc.handle({"GET", "/games/" + id + "/graph", {}, ""}).body;

  ASSERT_EQ(run("build-game --groups C2,C3 --rounds 1 -o " + path("game.json")).status, 0);
  ASSERT_EQ(run("play --game " + path("game.json") + " --challenges 1 --graph-out " + path("g.json")).status, 0);
  EXPECT_EQ(slurp(path("g.json")), api_graph);

  // The API transcript replays through the CLI to the same orders.
  const json transcript = json::parse(svc.handle({"GET", "/games/" + id, {}, ""}).body)["transcript"];
  std::ofstream(path("api.json")) << transcript.dump();
  const CliRun replay = run("play --game " + path("api.json"), "q\\n");
  EXPECT_EQ(replay.status, 0) << replay.output;
  EXPECT_EQ(json::parse(slurp(path("api.json")))["moves"], transcript["moves"]);
}

TEST_F(CliTest, ExportDot) {
  ASSERT_EQ(run("build-gadget --group C2 -o " + path("g.json")).status, 0);
  const CliRun r = run("export-dot --graph " + path("g.json"));
  ASSERT_EQ(r.status, 0);
  std::size_t nodes = 0;
  for (std::size_t p = r.output.find("[shape="); p != std::string::npos; p = r.output.find("[shape=", p + 1)) ++nodes;
  EXPECT_EQ(nodes, 61u);
  EXPECT_NE(run("export-dot").status, 0);
}

TEST_F(CliTest, InputErrors) {
  EXPECT_EQ(run("build-gadget --group Q8").status, 2);
  EXPECT_EQ(run("build-gadget --group C65").status, 3);
  EXPECT_EQ(run("build-game --groups C2,C3,C2xC2 --rounds 3").status, 3);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("play --game " + path("missing.json")).status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, EnvironmentGuardrail) {
  EXPECT_EQ(run("build-gadget --group C5").status, 0);
  const std::string cmd = "VDG_MAX_GROUP_ORDER=4 " + std::string(VDG_CLI) + " build-gadget --group C5 >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 3);
}

}  // namespace
}  // namespace vdg
