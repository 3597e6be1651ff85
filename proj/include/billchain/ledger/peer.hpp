#pragma once

// Committing peers. The orderer hands every block to each peer, which checks
// the hash link, re-verifies each transaction against its own copy of the
// forest, applies it, and persists the block to its own store.

#include <memory>
#include <stdexcept>
#include <vector>

#include "billchain/ledger/block_store.hpp"
#include "billchain/ledger/ledger.hpp"

namespace billchain::ledger {

class PeerDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PeerReplica final : public BlockSink {
 public:
  // `store` may be null for an in-memory peer.
  PeerReplica(protocol::VerifyContext ctx, LedgerConfig config,
              std::unique_ptr<BlockSink> store = nullptr);

  // Throws PeerDivergence when the block does not extend this peer's chain
  // or a transaction fails verification here.
  void append(const Block& block) override;

  uint64_t height() const { return height_; }
  const Digest& tip_hash() const { return tip_; }
  const rht::RhtForest& forest() const { return forest_; }

 private:
  protocol::VerifyContext ctx_;
  LedgerConfig config_;
  std::unique_ptr<BlockSink> store_;
  rht::RhtForest forest_;
  uint64_t height_ = 0;
  Digest tip_;
};

// Delivers each block to several sinks in order.
class FanoutSink final : public BlockSink {
 public:
  void add(BlockSink& sink) { sinks_.push_back(&sink); }
  void append(const Block& block) override {
    for (BlockSink* s : sinks_) s->append(block);
  }

 private:
  std::vector<BlockSink*> sinks_;
};

}  // namespace billchain::ledger
