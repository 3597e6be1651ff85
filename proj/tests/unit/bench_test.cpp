#include <gtest/gtest.h>

#include <sstream>

#include "billchain/bench/bench.hpp"
#include "billchain/bench/stats.hpp"

namespace billchain::bench {
namespace {

TEST(Stats, NearestRankPercentiles) {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  const LatencySummary s = summarize(v);
  EXPECT_EQ(s.count, 100u);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_DOUBLE_EQ(s.p50, 50);
  EXPECT_DOUBLE_EQ(s.p95, 95);
  EXPECT_DOUBLE_EQ(s.p99, 99);
  EXPECT_DOUBLE_EQ(s.max, 100);

  EXPECT_DOUBLE_EQ(percentile({5, 1, 3}, 50), 3);  // rank ceil(1.5) = 2
  EXPECT_DOUBLE_EQ(percentile({5, 1, 3}, 100), 5);
  EXPECT_DOUBLE_EQ(percentile({7}, 1), 7);
  EXPECT_DOUBLE_EQ(percentile({}, 50), 0);
  EXPECT_EQ(summarize({}).count, 0u);
}

TEST(Workloads, ParseAndPrint) {
  for (Workload w : {Workload::kIssue, Workload::kSplit, Workload::kQuery, Workload::kMix}) {
    EXPECT_EQ(parse_workload(to_string(w)), w);
  }
  EXPECT_FALSE(parse_workload("transfer").has_value());
}

Scenario small(Workload w, uint32_t count) {
  Scenario s;
  s.workload = w;
  s.tx_count = count;
  s.key_bits = 256;
  s.key_mode = KeyMode::kTest;
  s.range_bits = 24;
  s.max_message_count = 4;
  s.batch_timeout_ms = 10;
  s.workers = 2;
  s.seed = 5;
  return s;
}

TEST(Scenario, Validation) {
  EXPECT_NO_THROW(small(Workload::kIssue, 1).validate());
  Scenario s = small(Workload::kIssue, 0);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small(Workload::kIssue, 1);
  s.workers = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small(Workload::kIssue, 1);
  s.range_bits = 20;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small(Workload::kIssue, 1);
  s.key_mode = KeyMode::kProduction;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small(Workload::kMix, 1);
  s.mix_issue = s.mix_split = s.mix_query = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(run_bench(small(Workload::kIssue, 0)), std::invalid_argument);
}

TEST(RunBench, SingleIssue) {
  std::ostringstream log;
  const BenchResult r = run_bench(small(Workload::kIssue, 1), &log);
  EXPECT_EQ(r.committed, 1u);
  EXPECT_EQ(r.rejected, 0u);
  EXPECT_GE(r.blocks, 1u);
  EXPECT_TRUE(r.integrity_ok);
  EXPECT_GT(r.tps, 0);
  EXPECT_EQ(r.latency_ms.count, 1u);
  const std::string lines = log.str();
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 1);
  EXPECT_NE(lines.find("committed"), std::string::npos);
}

TEST(RunBench, ContentIsFixedBySeedNotScheduling) {
  Scenario a = small(Workload::kMix, 24);
  Scenario b = a;
  b.workers = 4;
  b.max_message_count = 1;
  const BenchResult ra = run_bench(a), rb = run_bench(b);
  EXPECT_TRUE(ra.integrity_ok);
  EXPECT_TRUE(rb.integrity_ok);
  EXPECT_EQ(ra.committed, rb.committed);
  EXPECT_EQ(ra.queries, rb.queries);
  EXPECT_EQ(ra.committed + ra.queries, 24u);
  EXPECT_EQ(ra.content_digest, rb.content_digest);
  EXPECT_EQ(rb.blocks, rb.committed);  // one transaction per block

  Scenario c = a;
  c.seed = 6;
  EXPECT_NE(run_bench(c).content_digest, ra.content_digest);

  const std::string json = to_json_line(a, ra);
  EXPECT_EQ(json.find('\n'), std::string::npos);
  EXPECT_NE(json.find("\"tps\""), std::string::npos);
  EXPECT_NE(to_text(a, ra).find("mix"), std::string::npos);
}

TEST(RunBench, SplitsAndQueries) {
  const BenchResult s = run_bench(small(Workload::kSplit, 6));
  EXPECT_EQ(s.committed, 6u);
  EXPECT_EQ(s.receiver_check_ms.count, 6u);
  EXPECT_TRUE(s.integrity_ok);
  const BenchResult q = run_bench(small(Workload::kQuery, 10));
  EXPECT_EQ(q.queries, 10u);
  EXPECT_EQ(q.committed, 0u);
  EXPECT_TRUE(q.integrity_ok);
}

}  // namespace
}  // namespace billchain::bench
