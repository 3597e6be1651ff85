#pragma once

// Throughput and latency harness. Submitter workers build transactions
// (client-side crypto included) and hand them to a single ordering service
// that cuts blocks and delivers them to committing peers.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "billchain/bench/stats.hpp"
#include "billchain/crypto/hash.hpp"
#include "billchain/crypto/paillier.hpp"

namespace billchain::bench {

enum class Workload { kIssue, kSplit, kQuery, kMix };

const char* to_string(Workload w);
std::optional<Workload> parse_workload(std::string_view s);

struct Scenario {
  Workload workload = Workload::kIssue;
  uint32_t tx_count = 2000;
  uint32_t key_bits = 1024;
  uint32_t max_message_count = 16;
  uint32_t batch_timeout_ms = 2000;
  uint64_t seed = 1;
  uint32_t range_bits = 32;
  uint32_t workers = 4;
  uint32_t peers = 2;
  // Relative weights for Workload::kMix.
  uint32_t mix_issue = 2;
  uint32_t mix_split = 1;
  uint32_t mix_query = 2;
  KeyMode key_mode = KeyMode::kProduction;
  // Block files go here; a temporary directory is used (and removed) if unset.
  std::optional<std::filesystem::path> data_dir;

  // Throws std::invalid_argument.
  void validate() const;
};

// Summed over the timed phase, in milliseconds.
struct StepBreakdown {
  double client_crypto_ms = 0;   // building issue/split transactions
  double receiver_check_ms = 0;  // receiver-witness exchanges before submission
  double verify_ms = 0;          // orderer miner verification
  double apply_ms = 0;           // orderer forest updates
  double persist_ms = 0;         // orderer store plus peer validation and commit
  double query_ms = 0;
};

struct BenchResult {
  uint64_t committed = 0;  // transactions in blocks
  uint64_t rejected = 0;
  uint64_t queries = 0;
  uint64_t blocks = 0;
  double wall_seconds = 0;
  double tps = 0;  // (committed + queries) / wall_seconds
  LatencySummary latency_ms;       // submit -> commit; query duration for queries
  LatencySummary receiver_check_ms;  // per split, reported apart from latency
  StepBreakdown steps;
  // Hash over the sorted ids of committed transactions: fixed by the seed.
  Digest content_digest;
  // Chain links, forest conservation and peer agreement all held afterwards.
  bool integrity_ok = false;
};

// Throws std::invalid_argument for invalid scenarios.
BenchResult run_bench(const Scenario& scenario, std::ostream* receipt_log = nullptr);

std::string to_json_line(const Scenario& scenario, const BenchResult& result);
std::string to_text(const Scenario& scenario, const BenchResult& result);

}  // namespace billchain::bench
