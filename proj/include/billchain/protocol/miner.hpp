#pragma once

// Public verification by miners. A split passes through five ordered checks
// and stops at the first failure:
//   1 signatures   sender signature and one countersignature per receiver
//   2 spendability bill exists, is still a leaf, and belongs to the sender
//   3 integrity    the bill's lineage recomputes and E(in) is the stored one
//   4 positivity   every output carries a valid range proof for [1, 2^L]
//   5 balance      E(in) equals the product of the output ciphertexts
// Failures are reported, never thrown, so every node agrees on the reason.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "billchain/protocol/messages.hpp"
#include "billchain/rht/forest.hpp"

namespace billchain::protocol {

// Stable one-byte codes; the high nibble is the failing step.
enum class VerifyCode : uint8_t {
  kOk = 0x00,
  kMalformedTx = 0x10,
  kBadSenderSignature = 0x11,
  kMissingReceiverSignature = 0x12,
  kBadReceiverSignature = 0x13,
  kBadWitnessSignature = 0x14,
  kBillNotFound = 0x21,
  kBillSpent = 0x22,
  kNotOwner = 0x23,
  kDuplicateBill = 0x24,
  kPathMismatch = 0x31,
  kInputMismatch = 0x32,
  kRangeProofInvalid = 0x41,
  kBalanceMismatch = 0x51,
};

const char* to_string(VerifyCode code);

struct VerifyReport {
  std::array<bool, 5> steps{};  // Verify-1 .. Verify-5
  bool accepted = false;
  std::optional<int> failing_step;  // 1-based
  VerifyCode reason = VerifyCode::kOk;

  static VerifyReport pass();
  static VerifyReport fail(int step, VerifyCode reason);
};

void encode(Encoder& enc, const VerifyReport& report);
VerifyReport decode_verify_report(Decoder& dec);

struct VerifyContext {
  PaillierPublicKey pk_w;
  SigPublicKey witness;
  uint32_t range_bits = 32;
};

VerifyReport miner_verify(const VerifyContext& ctx, const SignedTx& stx,
                          const rht::RhtForest& forest);

// Issues reuse the step numbering: witness signature (1), fresh id (2),
// root shape (3), ciphertext well-formed (4); step 5 is vacuous.
VerifyReport miner_verify(const VerifyContext& ctx, const IssueTx& tx,
                          const rht::RhtForest& forest);

VerifyReport miner_verify(const VerifyContext& ctx, const LedgerTx& tx,
                          const rht::RhtForest& forest);

// Appends one child per output under the spent bill. Throws rht::RhtError
// (leaving the forest untouched) if the bill is missing or already spent.
std::vector<rht::EBillId> apply_tx(rht::RhtForest& forest, const SignedTx& stx);
rht::EBillId apply_tx(rht::RhtForest& forest, const IssueTx& tx);
std::vector<rht::EBillId> apply_tx(rht::RhtForest& forest, const LedgerTx& tx);

// Child infos a split creates, in output order.
std::vector<rht::BillInfo> child_infos(const SplitTx& tx);

}  // namespace billchain::protocol
