#include "billchain/protocol/miner.hpp"

#include <set>

namespace billchain::protocol {

const char* to_string(VerifyCode code) {
  switch (code) {
    case VerifyCode::kOk: return "ok";
    case VerifyCode::kMalformedTx: return "malformed-transaction";
    case VerifyCode::kBadSenderSignature: return "bad-sender-signature";
    case VerifyCode::kMissingReceiverSignature: return "missing-receiver-signature";
    case VerifyCode::kBadReceiverSignature: return "bad-receiver-signature";
    case VerifyCode::kBadWitnessSignature: return "bad-witness-signature";
    case VerifyCode::kBillNotFound: return "bill-not-found";
    case VerifyCode::kBillSpent: return "bill-already-spent";
    case VerifyCode::kNotOwner: return "sender-not-owner";
    case VerifyCode::kDuplicateBill: return "duplicate-bill";
    case VerifyCode::kPathMismatch: return "path-mismatch";
    case VerifyCode::kInputMismatch: return "input-ciphertext-mismatch";
    case VerifyCode::kRangeProofInvalid: return "range-proof-invalid";
    case VerifyCode::kBalanceMismatch: return "balance-mismatch";
  }
  return "unknown";
}

VerifyReport VerifyReport::pass() {
  VerifyReport r;
  r.steps.fill(true);
  r.accepted = true;
  return r;
}

VerifyReport VerifyReport::fail(int step, VerifyCode reason) {
  VerifyReport r;
  for (int i = 0; i < step - 1; ++i) r.steps[i] = true;
  r.failing_step = step;
  r.reason = reason;
  return r;
}

void encode(Encoder& enc, const VerifyReport& report) {
  enc.put_uint(report.failing_step.value_or(0));
  enc.put_uint(static_cast<uint8_t>(report.reason));
}

VerifyReport decode_verify_report(Decoder& dec) {
  const uint64_t step = dec.get_uint();
  const uint64_t reason = dec.get_uint();
  if (step > 5 || reason > 0xFF) throw DecodeError("malformed verify report");
  if (step == 0) return VerifyReport::pass();
  return VerifyReport::fail(static_cast<int>(step), static_cast<VerifyCode>(reason));
}

VerifyReport miner_verify(const VerifyContext& ctx, const SignedTx& stx,
                          const rht::RhtForest& forest) {
  const SplitTx& tx = stx.tx;

  // Verify-1: shape, then signatures. The countersignature quorum is every
  // distinct receiver named in the outputs.
  if (tx.outputs.empty() || tx.range_proofs.size() != tx.outputs.size()) {
    return VerifyReport::fail(1, VerifyCode::kMalformedTx);
  }
  if (!verify_sig(tx.sender, sender_message(tx), stx.sender_sig)) {
    return VerifyReport::fail(1, VerifyCode::kBadSenderSignature);
  }
  std::set<SigPublicKey> receivers;
  for (const TxOutput& out : tx.outputs) receivers.insert(out.receiver);
  if (stx.receiver_sigs.size() != receivers.size()) {
    return VerifyReport::fail(1, VerifyCode::kMissingReceiverSignature);
  }
  const Bytes countersigned = receiver_message(tx, stx.sender_sig);
  for (const SigPublicKey& r : receivers) {
    auto it = stx.receiver_sigs.find(r);
    if (it == stx.receiver_sigs.end()) {
      return VerifyReport::fail(1, VerifyCode::kMissingReceiverSignature);
    }
    if (!verify_sig(r, countersigned, it->second)) {
      return VerifyReport::fail(1, VerifyCode::kBadReceiverSignature);
    }
  }

  // Verify-2: the bill must be an unspent leaf owned by the sender.
  switch (forest.leaf_status(tx.bill_id)) {
    case rht::LeafStatus::kNotFound:
      return VerifyReport::fail(2, VerifyCode::kBillNotFound);
    case rht::LeafStatus::kSpent:
      return VerifyReport::fail(2, VerifyCode::kBillSpent);
    case rht::LeafStatus::kLeaf:
      break;
  }
  if (forest.owner_of(tx.bill_id) != tx.sender) {
    return VerifyReport::fail(2, VerifyCode::kNotOwner);
  }

  // Verify-3: lineage recomputes and E(in) is byte-identical to the stored
  // bill ciphertext.
  if (!forest.verify_path(tx.bill_info, tx.bill_id)) {
    return VerifyReport::fail(3, VerifyCode::kPathMismatch);
  }
  if (tx.input_ct != forest.find(tx.bill_id)->info.amount_ct) {
    return VerifyReport::fail(3, VerifyCode::kInputMismatch);
  }

  // Verify-4: every output amount is in [1, 2^L].
  for (size_t i = 0; i < tx.outputs.size(); ++i) {
    if (!verify_positive(ctx.pk_w, tx.outputs[i].amount_ct, tx.range_proofs[i], ctx.range_bits)) {
      return VerifyReport::fail(4, VerifyCode::kRangeProofInvalid);
    }
  }

  // Verify-5: E(in) = prod E(out_i).
  std::vector<Ciphertext> outs;
  outs.reserve(tx.outputs.size());
  for (const TxOutput& out : tx.outputs) outs.push_back(out.amount_ct);
  if (!verify_balance(ctx.pk_w, tx.input_ct, outs)) {
    return VerifyReport::fail(5, VerifyCode::kBalanceMismatch);
  }
  return VerifyReport::pass();
}

VerifyReport miner_verify(const VerifyContext& ctx, const IssueTx& tx,
                          const rht::RhtForest& forest) {
  if (!verify_sig(ctx.witness, issue_message(tx.nonce, tx.info), tx.witness_sig)) {
    return VerifyReport::fail(1, VerifyCode::kBadWitnessSignature);
  }
  if (forest.contains(rht::compute_root_id(tx.nonce, tx.info))) {
    return VerifyReport::fail(2, VerifyCode::kDuplicateBill);
  }
  if (!tx.info.path.empty()) return VerifyReport::fail(3, VerifyCode::kPathMismatch);
  if (!is_valid_ciphertext(ctx.pk_w, tx.info.amount_ct)) {
    return VerifyReport::fail(4, VerifyCode::kMalformedTx);
  }
  return VerifyReport::pass();
}

VerifyReport miner_verify(const VerifyContext& ctx, const LedgerTx& tx,
                          const rht::RhtForest& forest) {
  return std::visit([&](const auto& t) { return miner_verify(ctx, t, forest); }, tx);
}

namespace {

std::vector<rht::BillInfo> children_under(const rht::EBillId& parent,
                                          std::vector<rht::EBillId> path,
                                          const std::vector<TxOutput>& outputs) {
  path.push_back(parent);
  std::vector<rht::BillInfo> out;
  out.reserve(outputs.size());
  for (const TxOutput& o : outputs) out.push_back(rht::BillInfo{o.amount_ct, o.receiver, path});
  return out;
}

}  // namespace

std::vector<rht::BillInfo> child_infos(const SplitTx& tx) {
  return children_under(tx.bill_id, tx.bill_info.path, tx.outputs);
}

std::vector<rht::EBillId> apply_tx(rht::RhtForest& forest, const SignedTx& stx) {
  // Paths are derived from the stored parent, not the transaction's copy.
  const rht::RhtForest::Node* parent = forest.find(stx.tx.bill_id);
  if (!parent) throw rht::RhtError(rht::RhtErrc::kNotFound, "bill not found");
  return forest.append_children(stx.tx.bill_id,
                                children_under(stx.tx.bill_id, parent->info.path, stx.tx.outputs));
}

rht::EBillId apply_tx(rht::RhtForest& forest, const IssueTx& tx) {
  return forest.issue_root(tx.nonce, tx.info);
}

std::vector<rht::EBillId> apply_tx(rht::RhtForest& forest, const LedgerTx& tx) {
  if (const auto* issue = std::get_if<IssueTx>(&tx)) return {apply_tx(forest, *issue)};
  return apply_tx(forest, std::get<SignedTx>(tx));
}

}  // namespace billchain::protocol
