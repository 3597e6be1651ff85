#pragma once

// Wire messages exchanged between sender, receivers, witness and miners.
// All of them use the canonical encodings from crypto/encoding.hpp.

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "billchain/crypto/envelope.hpp"
#include "billchain/crypto/range_proof.hpp"
#include "billchain/crypto/signature.hpp"
#include "billchain/rht/bill.hpp"

namespace billchain::protocol {

struct TxOutput {
  SigPublicKey receiver;
  Ciphertext amount_ct;

  friend bool operator==(const TxOutput&, const TxOutput&) = default;
};

// {E(in), {pk_i : E(out_i)}, bill} plus one positivity proof per output.
struct SplitTx {
  Ciphertext input_ct;
  std::vector<TxOutput> outputs;
  rht::EBillId bill_id;
  rht::BillInfo bill_info;
  std::vector<RangeProof> range_proofs;
  SigPublicKey sender;

  friend bool operator==(const SplitTx&, const SplitTx&) = default;
};

struct SignedTx {
  SplitTx tx;
  Signature sender_sig;
  std::map<SigPublicKey, Signature> receiver_sigs;

  friend bool operator==(const SignedTx&, const SignedTx&) = default;
};

// Root issuance by the witness.
struct IssueTx {
  rht::RootNonce nonce;
  rht::BillInfo info;
  Signature witness_sig;

  friend bool operator==(const IssueTx&, const IssueTx&) = default;
};

using LedgerTx = std::variant<IssueTx, SignedTx>;

// Sealed to one receiver: the sender-signed payload plus that receiver's
// opening, which it needs to split the bill later.
struct ReceiverParcel {
  SplitTx tx;
  Signature sender_sig;
  uint32_t output_index = 0;
  Opening opening;
};

// Sealed to the owner of a freshly issued root bill.
struct IssueParcel {
  rht::EBillId id;
  rht::BillInfo info;
  Opening opening;
};

struct SignedEqualityQuery {
  SigPublicKey requester;
  EqualityQuery query;
  Signature sig;
};

void encode(Encoder& enc, const SplitTx& tx);
SplitTx decode_split_tx(Decoder& dec);
void encode(Encoder& enc, const SignedTx& stx);
SignedTx decode_signed_tx(Decoder& dec);
void encode(Encoder& enc, const IssueTx& tx);
IssueTx decode_issue_tx(Decoder& dec);
void encode(Encoder& enc, const LedgerTx& tx);
LedgerTx decode_ledger_tx(Decoder& dec);
void encode(Encoder& enc, const ReceiverParcel& p);
ReceiverParcel decode_receiver_parcel(Decoder& dec);
void encode(Encoder& enc, const IssueParcel& p);
IssueParcel decode_issue_parcel(Decoder& dec);
void encode(Encoder& enc, const SignedEqualityQuery& q);
SignedEqualityQuery decode_signed_equality_query(Decoder& dec);

template <typename T>
Bytes to_bytes(const T& value) {
  Encoder enc;
  encode(enc, value);
  return std::move(enc).bytes();
}

// Byte strings that get signed. Each carries its own domain tag.
Bytes sender_message(const SplitTx& tx);
Bytes receiver_message(const SplitTx& tx, const Signature& sender_sig);
Bytes issue_message(const rht::RootNonce& nonce, const rht::BillInfo& info);
Bytes equality_query_message(const SigPublicKey& requester, const EqualityQuery& query);

Digest tx_hash(const LedgerTx& tx);

}  // namespace billchain::protocol
