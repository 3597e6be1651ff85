#include "billchain/protocol/messages.hpp"

#include <optional>

namespace billchain::protocol {

namespace {

constexpr size_t kMaxOutputs = 1024;
constexpr uint64_t kIssueKind = 1;
constexpr uint64_t kSplitKind = 2;

}  // namespace

void encode(Encoder& enc, const SplitTx& tx) {
  encode(enc, tx.input_ct);
  enc.put_count(tx.outputs.size());
  for (const TxOutput& out : tx.outputs) {
    enc.put_fixed(out.receiver);
    encode(enc, out.amount_ct);
  }
  enc.put_fixed(tx.bill_id);
  rht::encode(enc, tx.bill_info);
  enc.put_count(tx.range_proofs.size());
  for (const RangeProof& proof : tx.range_proofs) encode(enc, proof);
  enc.put_fixed(tx.sender);
}

SplitTx decode_split_tx(Decoder& dec) {
  SplitTx tx;
  tx.input_ct = decode_ciphertext(dec);
  const size_t outs = dec.get_count(kMaxOutputs);
  tx.outputs.reserve(outs);
  for (size_t i = 0; i < outs; ++i) {
    TxOutput out;
    out.receiver = dec.get_fixed<SigPublicKey>();
    out.amount_ct = decode_ciphertext(dec);
    tx.outputs.push_back(std::move(out));
  }
  tx.bill_id = dec.get_fixed<rht::EBillId>();
  tx.bill_info = rht::decode_bill_info(dec);
  const size_t proofs = dec.get_count(kMaxOutputs);
  tx.range_proofs.reserve(proofs);
  for (size_t i = 0; i < proofs; ++i) tx.range_proofs.push_back(decode_range_proof(dec));
  tx.sender = dec.get_fixed<SigPublicKey>();
  return tx;
}

void encode(Encoder& enc, const SignedTx& stx) {
  encode(enc, stx.tx);
  enc.put_fixed(stx.sender_sig);
  enc.put_count(stx.receiver_sigs.size());
  for (const auto& [pk, sig] : stx.receiver_sigs) enc.put_fixed(pk).put_fixed(sig);
}

SignedTx decode_signed_tx(Decoder& dec) {
  SignedTx stx;
  stx.tx = decode_split_tx(dec);
  stx.sender_sig = dec.get_fixed<Signature>();
  const size_t count = dec.get_count(kMaxOutputs);
  std::optional<SigPublicKey> previous;
  for (size_t i = 0; i < count; ++i) {
    const auto pk = dec.get_fixed<SigPublicKey>();
    const auto sig = dec.get_fixed<Signature>();
    // Strictly increasing keys keep the encoding canonical.
    if (previous && !(*previous < pk)) throw DecodeError("receiver signatures out of order");
    stx.receiver_sigs.emplace(pk, sig);
    previous = pk;
  }
  return stx;
}

void encode(Encoder& enc, const IssueTx& tx) {
  enc.put_fixed(tx.nonce);
  rht::encode(enc, tx.info);
  enc.put_fixed(tx.witness_sig);
}

IssueTx decode_issue_tx(Decoder& dec) {
  IssueTx tx;
  tx.nonce = dec.get_fixed<rht::RootNonce>();
  tx.info = rht::decode_bill_info(dec);
  tx.witness_sig = dec.get_fixed<Signature>();
  return tx;
}

void encode(Encoder& enc, const LedgerTx& tx) {
  if (const auto* issue = std::get_if<IssueTx>(&tx)) {
    enc.put_uint(kIssueKind);
    encode(enc, *issue);
  } else {
    enc.put_uint(kSplitKind);
    encode(enc, std::get<SignedTx>(tx));
  }
}

LedgerTx decode_ledger_tx(Decoder& dec) {
  switch (dec.get_uint()) {
    case kIssueKind:
      return decode_issue_tx(dec);
    case kSplitKind:
      return decode_signed_tx(dec);
    default:
      throw DecodeError("unknown transaction kind");
  }
}

void encode(Encoder& enc, const ReceiverParcel& p) {
  encode(enc, p.tx);
  enc.put_fixed(p.sender_sig);
  enc.put_uint(p.output_index);
  encode(enc, p.opening);
}

ReceiverParcel decode_receiver_parcel(Decoder& dec) {
  ReceiverParcel p;
  p.tx = decode_split_tx(dec);
  p.sender_sig = dec.get_fixed<Signature>();
  const uint64_t index = dec.get_uint();
  if (index >= kMaxOutputs) throw DecodeError("output index out of range");
  p.output_index = static_cast<uint32_t>(index);
  p.opening = decode_opening(dec);
  return p;
}

void encode(Encoder& enc, const IssueParcel& p) {
  enc.put_fixed(p.id);
  rht::encode(enc, p.info);
  encode(enc, p.opening);
}

IssueParcel decode_issue_parcel(Decoder& dec) {
  IssueParcel p;
  p.id = dec.get_fixed<rht::EBillId>();
  p.info = rht::decode_bill_info(dec);
  p.opening = decode_opening(dec);
  return p;
}

void encode(Encoder& enc, const SignedEqualityQuery& q) {
  enc.put_fixed(q.requester);
  encode(enc, q.query);
  enc.put_fixed(q.sig);
}

SignedEqualityQuery decode_signed_equality_query(Decoder& dec) {
  SignedEqualityQuery q;
  q.requester = dec.get_fixed<SigPublicKey>();
  q.query = decode_equality_query(dec);
  q.sig = dec.get_fixed<Signature>();
  return q;
}

Bytes sender_message(const SplitTx& tx) {
  Encoder enc;
  enc.put_string("billchain/split/sender/v1");
  encode(enc, tx);
  return std::move(enc).bytes();
}

Bytes receiver_message(const SplitTx& tx, const Signature& sender_sig) {
  Encoder enc;
  enc.put_string("billchain/split/receiver/v1");
  encode(enc, tx);
  enc.put_fixed(sender_sig);
  return std::move(enc).bytes();
}

Bytes issue_message(const rht::RootNonce& nonce, const rht::BillInfo& info) {
  Encoder enc;
  enc.put_string("billchain/issue/v1").put_fixed(nonce);
  rht::encode(enc, info);
  return std::move(enc).bytes();
}

Bytes equality_query_message(const SigPublicKey& requester, const EqualityQuery& query) {
  Encoder enc;
  enc.put_string("billchain/equality-query/v1").put_fixed(requester);
  encode(enc, query);
  return std::move(enc).bytes();
}

Digest tx_hash(const LedgerTx& tx) { return hash256(to_bytes(tx)); }

}  // namespace billchain::protocol
