#include "billchain/ledger/block.hpp"

namespace billchain::ledger {

namespace {

constexpr size_t kMaxBlockTxs = 1u << 16;

void encode_header_and_txs(Encoder& enc, const Block& block) {
  enc.put_uint(block.height);
  enc.put_fixed(block.prev_hash);
  enc.put_uint(static_cast<uint64_t>(block.timestamp_ms));
  enc.put_count(block.txs.size());
  for (const protocol::LedgerTx& tx : block.txs) protocol::encode(enc, tx);
}

}  // namespace

Digest compute_block_hash(const Block& block) {
  Encoder enc;
  enc.put_string("billchain/block/v1");
  encode_header_and_txs(enc, block);
  return hash256(enc.bytes());
}

void encode(Encoder& enc, const Block& block) {
  encode_header_and_txs(enc, block);
  enc.put_fixed(block.block_hash);
}

Block decode_block(Decoder& dec) {
  Block block;
  block.height = dec.get_uint();
  block.prev_hash = dec.get_fixed<Digest>();
  block.timestamp_ms = static_cast<int64_t>(dec.get_uint());
  const size_t count = dec.get_count(kMaxBlockTxs);
  block.txs.reserve(count);
  for (size_t i = 0; i < count; ++i) block.txs.push_back(protocol::decode_ledger_tx(dec));
  block.block_hash = dec.get_fixed<Digest>();
  return block;
}

Bytes canonical(const Block& block) {
  Encoder enc;
  encode(enc, block);
  return std::move(enc).bytes();
}

Digest genesis_hash(const protocol::VerifyContext& ctx) {
  Encoder enc;
  enc.put_string("billchain/genesis/v1");
  ctx.pk_w.encode(enc);
  enc.put_fixed(ctx.witness);
  enc.put_uint(ctx.range_bits);
  return hash256(enc.bytes());
}

}  // namespace billchain::ledger
