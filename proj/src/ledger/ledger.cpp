#include "billchain/ledger/ledger.hpp"

#include <chrono>

#include <nlohmann/json.hpp>

namespace billchain::ledger {

namespace {

int64_t elapsed_us(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() -
                                                               since)
      .count();
}

// Validates one block against the state built so far and applies it.
void replay_block(const Block& block, const protocol::VerifyContext& ctx,
                  const LedgerConfig& config, ChainState& state, const Digest& prev) {
  const uint64_t h = block.height;
  const uint64_t expected = state.chain.size() + 1;
  if (h != expected) throw ReplayError(expected, "height " + std::to_string(h) + " out of sequence");
  if (block.prev_hash != prev) throw ReplayError(h, "prev_hash does not link");
  if (compute_block_hash(block) != block.block_hash) throw ReplayError(h, "block hash mismatch");
  if (block.txs.empty() || block.txs.size() > config.max_message_count) {
    throw ReplayError(h, "block size outside [1, max_message_count]");
  }
  if (!state.chain.empty() && block.timestamp_ms < state.chain.back().timestamp_ms) {
    throw ReplayError(h, "timestamp goes backwards");
  }
  for (size_t i = 0; i < block.txs.size(); ++i) {
    const protocol::VerifyReport report = protocol::miner_verify(ctx, block.txs[i], state.forest);
    if (!report.accepted) {
      throw ReplayError(h, "transaction " + std::to_string(i) + " fails step " +
                               std::to_string(*report.failing_step) + " (" +
                               protocol::to_string(report.reason) + ")");
    }
    protocol::apply_tx(state.forest, block.txs[i]);
    TxReceipt r;
    r.tx_id = protocol::tx_hash(block.txs[i]);
    r.status = TxStatus::kCommitted;
    r.height = h;
    r.commit_us = block.timestamp_ms * 1000;
    state.receipts.push_back(r);
  }
  state.chain.push_back(block);
}

// Throws ReplayError; `state` then holds a partially applied block.
void replay_into(ByteView stream, const protocol::VerifyContext& ctx, const LedgerConfig& config,
                 ChainState& state) {
  const RecordScan scan = scan_records(stream);
  const Digest genesis = genesis_hash(ctx);
  for (const RawRecord& rec : scan.records) {
    const uint64_t h = state.chain.size() + 1;
    Block block;
    try {
      Decoder dec(rec.body);
      block = decode_block(dec);
      dec.expect_end();
    } catch (const DecodeError& e) {
      throw ReplayError(h, std::string("undecodable block: ") + e.what());
    }
    replay_block(block, ctx, config, state,
                 state.chain.empty() ? genesis : state.chain.back().block_hash);
    state.valid_length = rec.offset + 4 + rec.body.size();
  }
  if (!scan.complete) throw ReplayError(state.chain.size() + 1, "truncated record");
}

}  // namespace

void LedgerConfig::validate() const {
  if (max_message_count == 0) throw std::invalid_argument("max_message_count must be positive");
  if (batch_timeout_ms == 0) throw std::invalid_argument("batch_timeout_ms must be positive");
  if (range_bits == 0) throw std::invalid_argument("range_bits must be positive");
  if (max_queue == 0) throw std::invalid_argument("max_queue must be positive");
  if (!is_supported_key_bits(key_bits, key_mode)) {
    throw std::invalid_argument("unsupported key_bits " + std::to_string(key_bits));
  }
}

const char* to_string(TxStatus status) {
  switch (status) {
    case TxStatus::kPending: return "pending";
    case TxStatus::kCommitted: return "committed";
    case TxStatus::kRejected: return "rejected";
    case TxStatus::kRejectedDuplicate: return "rejected-duplicate";
  }
  return "unknown";
}

std::optional<double> TxReceipt::latency_ms() const {
  if (!commit_us) return std::nullopt;
  return static_cast<double>(*commit_us - submit_us) / 1000.0;
}

std::string receipt_json_line(const TxReceipt& r) {
  nlohmann::json j;
  j["tx"] = r.tx_id.hex();
  j["status"] = to_string(r.status);
  j["height"] = r.height ? nlohmann::json(*r.height) : nlohmann::json(nullptr);
  j["submit_us"] = r.submit_us;
  j["commit_us"] = r.commit_us ? nlohmann::json(*r.commit_us) : nlohmann::json(nullptr);
  const auto latency = r.latency_ms();
  j["latency_ms"] = latency ? nlohmann::json(*latency) : nlohmann::json(nullptr);
  if (r.report && !r.report->accepted) {
    j["failing_step"] = *r.report->failing_step;
    j["reason"] = protocol::to_string(r.report->reason);
  }
  return j.dump();
}

ChainState replay(ByteView stream, const protocol::VerifyContext& ctx,
                  const LedgerConfig& config) {
  ChainState state;
  replay_into(stream, ctx, config, state);
  return state;
}

RecoveryResult recover_prefix(ByteView stream, const protocol::VerifyContext& ctx,
                              const LedgerConfig& config) {
  RecoveryResult result;
  try {
    replay_into(stream, ctx, config, result.state);
    return result;
  } catch (const ReplayError& e) {
    result.dropped = e;
  }
  // The failed block may have been half applied; rebuild from the clean prefix.
  const uint64_t keep = result.state.valid_length;
  result.state = ChainState{};
  replay_into(stream.first(keep), ctx, config, result.state);
  return result;
}

RecoveryResult recover_file(const std::filesystem::path& path,
                            const protocol::VerifyContext& ctx, const LedgerConfig& config) {
  const Bytes stream = BlockStore::read_stream(path);
  RecoveryResult result = recover_prefix(stream, ctx, config);
  if (result.dropped && std::filesystem::exists(path)) {
    BlockStore::truncate(path, result.state.valid_length);
  }
  return result;
}

bool verify_chain_links(const std::vector<Block>& chain, const protocol::VerifyContext& ctx) {
  Digest prev = genesis_hash(ctx);
  for (size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    if (b.height != i + 1 || b.prev_hash != prev || compute_block_hash(b) != b.block_hash) {
      return false;
    }
    prev = b.block_hash;
  }
  return true;
}

Ledger::Ledger(LedgerConfig config, protocol::VerifyContext ctx, const Clock& clock,
               BlockSink* sink, std::optional<ChainState> initial)
    : config_(std::move(config)), ctx_(std::move(ctx)), clock_(clock), sink_(sink) {
  config_.validate();
  if (initial) {
    chain_ = std::move(initial->chain);
    forest_ = std::move(initial->forest);
    for (TxReceipt& r : initial->receipts) {
      seen_.insert(r.tx_id);
      receipt_order_.push_back(r.tx_id);
      receipts_.emplace(r.tx_id, std::move(r));
    }
  }
}

TxReceipt Ledger::submit(protocol::LedgerTx tx) {
  TxReceipt r;
  r.tx_id = protocol::tx_hash(tx);
  r.submit_us = clock_.now_us();
  {
    std::lock_guard lock(queue_mu_);
    if (shutdown_) throw LedgerError(LedgerErrc::kShutdown, "ledger is shut down");
    if (queue_.size() >= config_.max_queue) {
      throw LedgerError(LedgerErrc::kQueueFull, "submission queue is full");
    }
    if (!seen_.insert(r.tx_id).second) {
      r.status = TxStatus::kRejectedDuplicate;
      r.commit_us = r.submit_us;
      return r;
    }
    // Recorded before the writer can see the transaction.
    record_receipt(r);
    queue_.push_back(Pending{std::move(tx), r.tx_id, r.submit_us});
  }
  return r;
}

bool Ledger::block_due() const {
  std::lock_guard lock(queue_mu_);
  if (queue_.empty()) return false;
  if (queue_.size() >= config_.max_message_count) return true;
  return clock_.now_us() - queue_.front().submit_us >=
         static_cast<int64_t>(config_.batch_timeout_ms) * 1000;
}

std::optional<int64_t> Ledger::next_deadline_us() const {
  std::lock_guard lock(queue_mu_);
  if (queue_.empty()) return std::nullopt;
  return queue_.front().submit_us + static_cast<int64_t>(config_.batch_timeout_ms) * 1000;
}

size_t Ledger::pending() const {
  std::lock_guard lock(queue_mu_);
  return queue_.size();
}

void Ledger::shutdown() {
  std::lock_guard lock(queue_mu_);
  shutdown_ = true;
}

bool Ledger::is_shutdown() const {
  std::lock_guard lock(queue_mu_);
  return shutdown_;
}

std::optional<Block> Ledger::cut_block() { return cut(false); }

std::optional<Block> Ledger::flush() { return cut(true); }

void Ledger::drain() {
  while (pending() > 0) flush();
}

std::optional<Block> Ledger::cut(bool force) {
  std::vector<Pending> batch;
  {
    std::lock_guard lock(queue_mu_);
    if (queue_.empty()) return std::nullopt;
    const bool full = queue_.size() >= config_.max_message_count;
    const bool timed_out = clock_.now_us() - queue_.front().submit_us >=
                           static_cast<int64_t>(config_.batch_timeout_ms) * 1000;
    if (!force && !full && !timed_out) return std::nullopt;
    const size_t take = std::min<size_t>(queue_.size(), config_.max_message_count);
    for (size_t i = 0; i < take; ++i) {
      batch.push_back(std::move(queue_.front()));
      queue_.pop_front();
    }
  }

  // Only this thread mutates forest_, so reading it unlocked is safe; writes
  // take the exclusive lock against concurrent queries.
  std::vector<protocol::LedgerTx> accepted;
  std::vector<Digest> accepted_ids;
  std::vector<std::pair<Digest, protocol::VerifyReport>> rejected;
  int64_t verify_us = 0;
  int64_t apply_us = 0;
  for (Pending& p : batch) {
    auto t0 = std::chrono::steady_clock::now();
    protocol::VerifyReport report = protocol::miner_verify(ctx_, p.tx, forest_);
    verify_us += elapsed_us(t0);
    if (!report.accepted) {
      rejected.emplace_back(p.id, std::move(report));
      continue;
    }
    t0 = std::chrono::steady_clock::now();
    {
      std::unique_lock lock(state_mu_);
      protocol::apply_tx(forest_, p.tx);
    }
    apply_us += elapsed_us(t0);
    accepted.push_back(std::move(p.tx));
    accepted_ids.push_back(p.id);
  }

  std::optional<Block> block;
  int64_t persist_us = 0;
  if (!accepted.empty()) {
    Block b;
    {
      std::shared_lock lock(state_mu_);
      b.height = chain_.size() + 1;
      b.prev_hash = chain_.empty() ? genesis_hash(ctx_) : chain_.back().block_hash;
      b.timestamp_ms = std::max(clock_.now_ms(), chain_.empty() ? 0 : chain_.back().timestamp_ms);
    }
    b.txs = std::move(accepted);
    b.block_hash = compute_block_hash(b);
    const auto t0 = std::chrono::steady_clock::now();
    if (sink_) {
      try {
        sink_->append(b);
      } catch (...) {
        // The forest already holds this batch; stop rather than diverge from
        // the store. Reopening recovers from what was persisted.
        shutdown();
        throw;
      }
    }
    persist_us = elapsed_us(t0);
    std::unique_lock lock(state_mu_);
    chain_.push_back(b);
    block = std::move(b);
  }

  const int64_t done_us = clock_.now_us();
  {
    std::unique_lock lock(state_mu_);
    timings_.verify_us += verify_us;
    timings_.apply_us += apply_us;
    timings_.persist_us += persist_us;
    timings_.committed += accepted_ids.size();
    timings_.rejected += rejected.size();
    if (block) ++timings_.blocks;
  }
  std::lock_guard lock(receipts_mu_);
  for (const Digest& id : accepted_ids) {
    TxReceipt& r = receipts_.at(id);
    r.status = TxStatus::kCommitted;
    r.height = block->height;
    r.commit_us = done_us;
  }
  for (auto& [id, report] : rejected) {
    TxReceipt& r = receipts_.at(id);
    r.status = TxStatus::kRejected;
    r.commit_us = done_us;
    r.report = std::move(report);
  }
  return block;
}

void Ledger::record_receipt(const TxReceipt& r) {
  std::lock_guard lock(receipts_mu_);
  receipts_.emplace(r.tx_id, r);
  receipt_order_.push_back(r.tx_id);
}

BillView Ledger::query_bill(const rht::EBillId& id) const {
  std::shared_lock lock(state_mu_);
  const rht::RhtForest::Node* node = forest_.find(id);
  if (!node) throw LedgerError(LedgerErrc::kNotFound, "bill " + id.hex() + " not found");
  return BillView{id, node->info, !node->children.empty(), node->children};
}

Block Ledger::query_chain(uint64_t height) const {
  std::shared_lock lock(state_mu_);
  if (height == 0 || height > chain_.size()) {
    throw LedgerError(LedgerErrc::kNotFound, "no block at height " + std::to_string(height));
  }
  return chain_[height - 1];
}

uint64_t Ledger::height() const {
  std::shared_lock lock(state_mu_);
  return chain_.size();
}

Digest Ledger::tip_hash() const {
  std::shared_lock lock(state_mu_);
  return chain_.empty() ? genesis_hash(ctx_) : chain_.back().block_hash;
}

std::vector<Block> Ledger::chain() const {
  std::shared_lock lock(state_mu_);
  return chain_;
}

rht::RhtForest Ledger::forest_snapshot() const {
  std::shared_lock lock(state_mu_);
  return forest_;
}

std::optional<TxReceipt> Ledger::receipt(const Digest& tx_id) const {
  std::lock_guard lock(receipts_mu_);
  auto it = receipts_.find(tx_id);
  if (it == receipts_.end()) return std::nullopt;
  return it->second;
}

std::vector<TxReceipt> Ledger::receipts() const {
  std::lock_guard lock(receipts_mu_);
  std::vector<TxReceipt> out;
  out.reserve(receipt_order_.size());
  for (const Digest& id : receipt_order_) out.push_back(receipts_.at(id));
  return out;
}

LedgerTimings Ledger::timings() const {
  std::shared_lock lock(state_mu_);
  return timings_;
}

}  // namespace billchain::ledger
