#pragma once

#include <vector>

#include "billchain/crypto/encoding.hpp"
#include "billchain/crypto/hash.hpp"
#include "billchain/crypto/paillier.hpp"
#include "billchain/crypto/signature.hpp"

namespace billchain::rht {

struct EBillIdTag {};
using EBillId = FixedBytes<32, EBillIdTag>;

struct RootNonceTag {};
// Random value standing in for the parent id of a root bill.
using RootNonce = FixedBytes<32, RootNonceTag>;

struct BillInfo {
  Ciphertext amount_ct;
  SigPublicKey owner;
  std::vector<EBillId> path;  // root ... parent; empty for a root bill

  friend bool operator==(const BillInfo&, const BillInfo&) = default;
};

void encode(Encoder& enc, const BillInfo& info);
BillInfo decode_bill_info(Decoder& dec);
Bytes canonical(const BillInfo& info);

// hash256(canonical(parent) || canonical(info)), where the parent is the
// 32-byte parent id or, for roots, the root nonce.
EBillId compute_id(ByteView parent, const BillInfo& info);
inline EBillId compute_child_id(const EBillId& parent, const BillInfo& info) {
  return compute_id(parent.view(), info);
}
inline EBillId compute_root_id(const RootNonce& nonce, const BillInfo& info) {
  return compute_id(nonce.view(), info);
}

}  // namespace billchain::rht
