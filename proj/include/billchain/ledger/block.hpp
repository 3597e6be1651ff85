#pragma once

#include <cstdint>
#include <vector>

#include "billchain/protocol/messages.hpp"
#include "billchain/protocol/miner.hpp"

namespace billchain::ledger {

struct Block {
  uint64_t height = 0;
  Digest prev_hash;
  int64_t timestamp_ms = 0;
  std::vector<protocol::LedgerTx> txs;
  Digest block_hash;

  friend bool operator==(const Block&, const Block&) = default;
};

// hash256 over the canonical header and transaction list.
Digest compute_block_hash(const Block& block);

void encode(Encoder& enc, const Block& block);
Block decode_block(Decoder& dec);
Bytes canonical(const Block& block);

// The implicit height-0 block. Its hash binds the network parameters, so a
// block stream only replays under the keys it was produced with.
Digest genesis_hash(const protocol::VerifyContext& ctx);

}  // namespace billchain::ledger
