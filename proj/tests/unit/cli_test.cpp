#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
  json j() const { return json::parse(out); }
};

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() /
          ("billchain-cli-" + std::to_string(::getpid()) + "-" + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  // `env` is prepended verbatim, e.g. "BILLCHAIN_SEED=3".
  CliRun run(const std::string& args, const std::string& env = "") const {
    const std::string cmd =
        "cd '" + dir.string() + "' && " + env + " '" BILLCHAIN_CLI_PATH "' " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  CliRun json_run(const std::string& args) const { return run("--data-dir net --seed 7 --json " + args); }

  void setup_network() {
    ASSERT_EQ(json_run("keygen --witness --test-keys --key-bits 256 --range-bits 16").code, 0);
    for (const char* name : {"alice", "bob", "carol"}) {
      ASSERT_EQ(json_run(std::string("keygen --actor ") + name).code, 0);
    }
  }
};

TEST_F(CliTest, IssueSplitQueryVerify) {
  setup_network();
  const CliRun issued = json_run("issue --to alice --amount 1000");
  ASSERT_EQ(issued.code, 0) << issued.out;
  const json ij = issued.j();
  EXPECT_EQ(ij["status"], "committed");
  EXPECT_EQ(ij["height"], 1);
  const std::string bill = ij["bill"];

  const CliRun split = json_run("split --from alice --bill " + bill + " --to bob:600 --to carol:400");
  ASSERT_EQ(split.code, 0) << split.out;
  const json sj = split.j();
  EXPECT_EQ(sj["status"], "committed");
  EXPECT_EQ(sj["height"], 2);
  ASSERT_EQ(sj["outputs"].size(), 2u);

  const json bob = json_run("query --owner bob").j();
  EXPECT_EQ(bob["unspent"], 1);
  EXPECT_EQ(bob["bills"][0]["amount"], "600");
  EXPECT_EQ(bob["bills"][0]["id"], sj["outputs"][0]["id"]);
  EXPECT_EQ(json_run("query --owner alice").j()["unspent"], 0);

  const json parent = json_run("query --bill " + bill).j();
  EXPECT_EQ(parent["status"], "spent");
  EXPECT_EQ(parent["children"].size(), 2u);
  const json block = json_run("query --height 2").j();
  EXPECT_EQ(block["txs"].size(), 1u);
  EXPECT_EQ(block["txs"][0], sj["tx"]);

  const std::string bob_bill = sj["outputs"][0]["id"];
  const CliRun moved = json_run("transfer --from bob --bill " + bob_bill + " --to carol");
  EXPECT_EQ(moved.code, 0) << moved.out;
  EXPECT_EQ(json_run("query --owner carol").j()["unspent"], 2);

  const json verified = json_run("verify").j();
  EXPECT_EQ(verified["status"], "ok");
  EXPECT_EQ(verified["height"], 3);
  EXPECT_EQ(verified["conservation"], "ok");

  // Human-readable output is "key: value" lines.
  const CliRun text = run("--data-dir net query --height 1");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("height: 1\n"), std::string::npos);
}

TEST_F(CliTest, PreconditionFailuresLeaveTheChainAlone) {
  setup_network();
  const std::string bill = json_run("issue --to alice --amount 100").j()["bill"];
  const auto before = fs::file_size(dir / "net" / "blocks.dat");

  EXPECT_EQ(json_run("split --from alice --bill " + bill + " --to bob:60 --to carol:30").code, 2);
  EXPECT_EQ(json_run("split --from alice --bill " + bill + " --to bob:100 --to carol:0").code, 2);
  EXPECT_EQ(json_run("split --from bob --bill " + bill + " --to carol:100").code, 2);
  EXPECT_EQ(json_run("split --from alice --bill " + bill + " --to dave:100").code, 2);
  EXPECT_EQ(json_run("split --from alice --bill nothex --to bob:100").code, 2);
  EXPECT_EQ(json_run("issue --to alice --amount 0").code, 2);
  EXPECT_EQ(json_run("issue --to alice --amount 65537").code, 2);
  EXPECT_EQ(fs::file_size(dir / "net" / "blocks.dat"), before);

  // Re-spending after a transfer is caught locally: the bill left the wallet.
  ASSERT_EQ(json_run("transfer --from alice --bill " + bill + " --to bob").code, 0);
  EXPECT_EQ(json_run("transfer --from alice --bill " + bill + " --to carol").code, 2);
}

TEST_F(CliTest, TamperedForestExportFailsStepThree) {
  setup_network();
  const std::string bill = json_run("issue --to alice --amount 100").j()["bill"];
  ASSERT_EQ(json_run("split --from alice --bill " + bill + " --to bob:70 --to carol:30").code, 0);
  ASSERT_EQ(json_run("export --what forest --out forest.txt").code, 0);
  EXPECT_EQ(json_run("verify --forest forest.txt").j()["status"], "ok");

  std::ifstream in(dir / "forest.txt");
  std::string first, rest, line;
  std::getline(in, first);
  while (std::getline(in, line)) rest += line + "\n";
  // Change the root's owner key (4th field).
  std::istringstream fields(first);
  std::string id, parent, ct, owner, path;
  fields >> id >> parent >> ct >> owner >> path;
  owner[0] = owner[0] == '0' ? '1' : '0';
  std::ofstream(dir / "bad.txt") << id << ' ' << parent << ' ' << ct << ' ' << owner << ' '
                                 << path << '\n'
                                 << rest;
  const CliRun bad = json_run("verify --forest bad.txt");
  EXPECT_EQ(bad.code, 1);
  const json bj = bad.j();
  EXPECT_EQ(bj["failing_step"], 3);
  EXPECT_EQ(bj["failing_bills"].size(), 3u);  // the root and both children

  const CliRun receipts = json_run("export --what receipts");
  EXPECT_EQ(std::count(receipts.out.begin(), receipts.out.end(), '\n'), 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(json_run("issue --to alice --amount 5").code, 2);  // no network yet
  EXPECT_EQ(json_run("keygen --witness --key-bits 512").code, 2);
  EXPECT_EQ(json_run("keygen").code, 2);
  setup_network();
  EXPECT_EQ(json_run("keygen --witness --test-keys --key-bits 256").code, 2);  // exists
  EXPECT_EQ(json_run("keygen --actor alice").code, 2);
  EXPECT_EQ(json_run("keygen --actor ../evil").code, 2);
  EXPECT_EQ(json_run("query").code, 2);
  EXPECT_EQ(json_run("query --height 9").code, 2);
  EXPECT_EQ(json_run("split --from alice --bill 00 --to bob").code, 2);
  EXPECT_EQ(json_run("bench --workload nope --test-keys --key-bits 256").code, 2);
  EXPECT_EQ(json_run("export --what nothing").code, 2);
}

TEST_F(CliTest, SettingsPrecedence) {
  std::ofstream(dir / "cfg.json") << R"({"data-dir": "from-config", "seed": 4})";
  const std::string keygen = "keygen --witness --test-keys --key-bits 64 --range-bits 8";
  ASSERT_EQ(run("--config cfg.json " + keygen).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from-config" / "network.json"));
  ASSERT_EQ(run("--config cfg.json " + keygen, "BILLCHAIN_DATA_DIR=from-env").code, 0);
  EXPECT_TRUE(fs::exists(dir / "from-env" / "network.json"));
  ASSERT_EQ(run(keygen + " --data-dir from-cli", "BILLCHAIN_CONFIG=cfg.json BILLCHAIN_DATA_DIR=from-env")
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "from-cli" / "network.json"));

  // The config seed fixed the keys; the env seed overrides it.
  auto network = [&](const char* d) {
    std::ifstream in(dir / d / "network.json");
    return json::parse(in);
  };
  EXPECT_EQ(network("from-config")["p"], network("from-env")["p"]);
  ASSERT_EQ(run("--config cfg.json " + keygen + " --data-dir other", "BILLCHAIN_SEED=5").code, 0);
  EXPECT_NE(network("other")["p"], network("from-config")["p"]);

  std::ofstream(dir / "bad.json") << R"({"colour": 1})";
  EXPECT_EQ(run("--config bad.json " + keygen).code, 2);
}

TEST_F(CliTest, BenchReportsJson) {
  const CliRun r = json_run(
      "bench --test-keys --key-bits 256 --range-bits 24 --tx-count 12 --workload mix --mix 1:1:1 "
      "--batch-timeout-ms 10 --receipts-out receipts.jsonl");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = r.j();
  EXPECT_GT(j["tps"].get<double>(), 0);
  EXPECT_TRUE(j["integrity_ok"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "receipts.jsonl"));
}

}  // namespace
