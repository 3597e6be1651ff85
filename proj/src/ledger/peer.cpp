#include "billchain/ledger/peer.hpp"

#include <string>

namespace billchain::ledger {

PeerReplica::PeerReplica(protocol::VerifyContext ctx, LedgerConfig config,
                         std::unique_ptr<BlockSink> store)
    : ctx_(std::move(ctx)), config_(std::move(config)), store_(std::move(store)),
      tip_(genesis_hash(ctx_)) {}

void PeerReplica::append(const Block& block) {
  if (block.height != height_ + 1 || block.prev_hash != tip_) {
    throw PeerDivergence("block " + std::to_string(block.height) + " does not extend height " +
                         std::to_string(height_));
  }
  if (compute_block_hash(block) != block.block_hash) {
    throw PeerDivergence("block " + std::to_string(block.height) + " hash mismatch");
  }
  if (block.txs.empty() || block.txs.size() > config_.max_message_count) {
    throw PeerDivergence("block " + std::to_string(block.height) + " has a bad size");
  }
  // Applied in place; a peer that throws here has diverged and is discarded.
  for (const protocol::LedgerTx& tx : block.txs) {
    const protocol::VerifyReport report = protocol::miner_verify(ctx_, tx, forest_);
    if (!report.accepted) {
      throw PeerDivergence("block " + std::to_string(block.height) + " carries a transaction " +
                           "failing step " + std::to_string(*report.failing_step));
    }
    protocol::apply_tx(forest_, tx);
  }
  if (store_) store_->append(block);
  height_ = block.height;
  tip_ = block.block_hash;
}

}  // namespace billchain::ledger
