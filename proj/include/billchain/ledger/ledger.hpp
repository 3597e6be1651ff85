#pragma once

// Single-orderer ledger. One writer turns the pending queue into blocks and
// owns the derived RHT forest; submissions and queries may come from any
// thread.

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "billchain/crypto/paillier.hpp"
#include "billchain/ledger/block.hpp"
#include "billchain/ledger/block_store.hpp"
#include "billchain/ledger/clock.hpp"
#include "billchain/protocol/miner.hpp"
#include "billchain/rht/forest.hpp"

namespace billchain::ledger {

struct LedgerConfig {
  uint32_t max_message_count = 16;
  uint32_t batch_timeout_ms = 2000;
  uint32_t key_bits = 1024;
  uint32_t range_bits = 32;
  size_t max_queue = 1u << 20;
  KeyMode key_mode = KeyMode::kProduction;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class TxStatus : uint8_t { kPending, kCommitted, kRejected, kRejectedDuplicate };

const char* to_string(TxStatus status);

struct TxReceipt {
  Digest tx_id;
  TxStatus status = TxStatus::kPending;
  std::optional<uint64_t> height;
  int64_t submit_us = 0;
  std::optional<int64_t> commit_us;  // set once committed or rejected
  std::optional<protocol::VerifyReport> report;  // set when rejected by a miner

  std::optional<double> latency_ms() const;
};

// One JSON object per line: tx, status, height, submit/commit times, latency.
std::string receipt_json_line(const TxReceipt& receipt);

enum class LedgerErrc { kShutdown, kQueueFull, kNotFound };

class LedgerError : public std::runtime_error {
 public:
  LedgerError(LedgerErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  LedgerErrc code() const { return code_; }

 private:
  LedgerErrc code_;
};

struct BillView {
  rht::EBillId id;
  rht::BillInfo info;
  bool spent = false;
  std::vector<rht::EBillId> children;
};

// Cumulative writer-side cost, in microseconds.
struct LedgerTimings {
  int64_t verify_us = 0;
  int64_t apply_us = 0;
  int64_t persist_us = 0;
  uint64_t blocks = 0;
  uint64_t committed = 0;
  uint64_t rejected = 0;
};

class ReplayError : public std::runtime_error {
 public:
  ReplayError(uint64_t height, const std::string& what)
      : std::runtime_error("replay failed at height " + std::to_string(height) + ": " + what),
        height_(height) {}
  uint64_t height() const { return height_; }

 private:
  uint64_t height_;
};

struct ChainState {
  std::vector<Block> chain;  // heights 1..tip; genesis is implicit
  rht::RhtForest forest;
  std::vector<TxReceipt> receipts;  // committed, in chain order
  uint64_t valid_length = 0;  // stream bytes covered by `chain`
};

// Strict: re-verifies every transaction and throws ReplayError at the first
// bad block. An empty stream yields the genesis state.
ChainState replay(ByteView stream, const protocol::VerifyContext& ctx, const LedgerConfig& config);

// Lenient: keeps the longest valid prefix and reports where it ended.
struct RecoveryResult {
  ChainState state;
  std::optional<ReplayError> dropped;  // the reason the tail was cut, if any
};
RecoveryResult recover_prefix(ByteView stream, const protocol::VerifyContext& ctx,
                              const LedgerConfig& config);

// Recovers the file at `path` and truncates any corrupt tail in place.
RecoveryResult recover_file(const std::filesystem::path& path, const protocol::VerifyContext& ctx,
                            const LedgerConfig& config);

// Hash links and block hashes only; no transaction re-verification.
bool verify_chain_links(const std::vector<Block>& chain, const protocol::VerifyContext& ctx);

class Ledger {
 public:
  // `sink` may be null (no persistence). `clock` and `sink` must outlive the
  // ledger. `initial` resumes from a recovered state.
  Ledger(LedgerConfig config, protocol::VerifyContext ctx, const Clock& clock,
         BlockSink* sink = nullptr, std::optional<ChainState> initial = std::nullopt);

  TxReceipt submit(protocol::LedgerTx tx);

  // Emits a block iff the queue holds max_message_count transactions or the
  // oldest has waited batch_timeout_ms. Writer thread only. A sink failure
  // shuts the ledger down and propagates.
  std::optional<Block> cut_block();
  // Cuts whatever is pending regardless of the thresholds. Writer thread only.
  std::optional<Block> flush();
  // Cuts until the queue is empty.
  void drain();

  bool block_due() const;
  // When the oldest pending transaction times out, if any is pending.
  std::optional<int64_t> next_deadline_us() const;
  size_t pending() const;

  void shutdown();
  bool is_shutdown() const;

  // Throws LedgerError(kNotFound).
  BillView query_bill(const rht::EBillId& id) const;
  Block query_chain(uint64_t height) const;

  uint64_t height() const;
  Digest tip_hash() const;
  std::vector<Block> chain() const;
  rht::RhtForest forest_snapshot() const;

  std::optional<TxReceipt> receipt(const Digest& tx_id) const;
  // In submission order; duplicates are not recorded.
  std::vector<TxReceipt> receipts() const;

  LedgerTimings timings() const;
  const LedgerConfig& config() const { return config_; }
  const Clock& clock() const { return clock_; }
  const protocol::VerifyContext& context() const { return ctx_; }

 private:
  struct Pending {
    protocol::LedgerTx tx;
    Digest id;
    int64_t submit_us;
  };

  std::optional<Block> cut(bool force);
  void record_receipt(const TxReceipt& r);

  const LedgerConfig config_;
  const protocol::VerifyContext ctx_;
  const Clock& clock_;
  BlockSink* sink_;

  mutable std::mutex queue_mu_;
  std::deque<Pending> queue_;
  std::unordered_set<Digest, FixedBytesHash> seen_;
  bool shutdown_ = false;

  mutable std::shared_mutex state_mu_;
  std::vector<Block> chain_;
  rht::RhtForest forest_;
  LedgerTimings timings_;

  mutable std::mutex receipts_mu_;
  std::unordered_map<Digest, TxReceipt, FixedBytesHash> receipts_;
  std::vector<Digest> receipt_order_;
};

}  // namespace billchain::ledger
