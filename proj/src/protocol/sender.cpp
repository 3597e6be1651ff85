#include "billchain/protocol/roles.hpp"

namespace billchain::protocol {

UserKeys UserKeys::from_seed(const Seed& seed) {
  auto derive = [&](std::string_view label) {
    Encoder enc;
    enc.put_fixed(seed).put_string(label);
    return Seed::from_view(hash256(enc.bytes()).view());
  };
  UserKeys keys;
  keys.sig = SigKeyPair::from_seed(derive("billchain/user/sig"));
  keys.enc = EncKeyPair::from_seed(derive("billchain/user/enc"));
  return keys;
}

WitnessKeys WitnessKeys::from_parts(PaillierKeyPair paillier, const Seed& s) {
  WitnessKeys keys;
  keys.paillier = std::move(paillier);
  keys.s = s;
  keys.sig = SigKeyPair::from_seed(s);
  const Digest k = hash256(s.view());
  keys.enc = EncKeyPair::from_seed(Seed::from_view(k.view()));
  return keys;
}

SplitProposal build_split_tx(const UserKeys& sender, const rht::EBillId& bill_id,
                             const rht::BillInfo& bill_info, const Opening& bill_opening,
                             std::span<const Recipient> recipients, const PaillierPublicKey& pk_w,
                             uint32_t range_bits, RandomSource& rng) {
  if (bill_info.owner != sender.sig.pub) {
    throw ProtocolError(ProtocolErrc::kNotOwner, "sender does not own the bill");
  }
  if (recipients.empty()) throw ProtocolError(ProtocolErrc::kNoRecipients, "no recipients");
  if (!range_params_fit(pk_w, range_bits, recipients.size()) ||
      !range_bits_supported(pk_w, range_bits)) {
    throw ProtocolError(ProtocolErrc::kRangeParams, "too many outputs for this range width");
  }
  const mpz_class upper = mpz_class(1) << range_bits;
  std::vector<mpz_class> amounts;
  amounts.reserve(recipients.size());
  mpz_class sum = 0;
  for (const Recipient& r : recipients) {
    if (r.amount < 1 || r.amount > upper) {
      throw ProtocolError(ProtocolErrc::kAmountOutOfRange, "output amount outside [1, 2^L]");
    }
    amounts.push_back(r.amount);
    sum += r.amount;
  }
  if (sum != bill_opening.amount) {
    throw ProtocolError(ProtocolErrc::kSumMismatch, "outputs do not sum to the bill amount");
  }
  if (bill_opening.randomness <= 0 || bill_opening.randomness >= pk_w.n ||
      encrypt(pk_w, bill_opening.amount, bill_opening.randomness) != bill_info.amount_ct) {
    throw ProtocolError(ProtocolErrc::kOpeningMismatch, "opening does not match the bill");
  }

  const EncryptedSplit split = encrypt_outputs(pk_w, bill_opening, amounts, range_bits, rng);

  SplitProposal proposal;
  SplitTx& tx = proposal.stx.tx;
  tx.input_ct = split.input;
  tx.bill_id = bill_id;
  tx.bill_info = bill_info;
  tx.sender = sender.sig.pub;
  for (size_t i = 0; i < recipients.size(); ++i) {
    tx.outputs.push_back(TxOutput{recipients[i].sig_pk, split.outputs[i]});
    tx.range_proofs.push_back(
        prove_positive(pk_w, split.outputs[i], split.out_openings[i], range_bits, rng));
  }
  proposal.stx.sender_sig = sign(sender.sig.sec, sender_message(tx));

  for (size_t i = 0; i < recipients.size(); ++i) {
    ReceiverParcel parcel{tx, proposal.stx.sender_sig, static_cast<uint32_t>(i),
                          split.out_openings[i]};
    proposal.envelopes.push_back(AddressedEnvelope{
        recipients[i].sig_pk, static_cast<uint32_t>(i),
        seal_for(recipients[i].enc_pk, to_bytes(parcel), rng)});
  }
  return proposal;
}

void attach_countersignature(SignedTx& stx, const SigPublicKey& receiver, const Signature& sig) {
  stx.receiver_sigs[receiver] = sig;
}

}  // namespace billchain::protocol
