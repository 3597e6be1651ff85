#include "billchain/protocol/roles.hpp"

namespace billchain::protocol {

const char* to_string(ReceiverErrc code) {
  switch (code) {
    case ReceiverErrc::kAccepted: return "accepted";
    case ReceiverErrc::kEnvelope: return "envelope-authentication-failed";
    case ReceiverErrc::kMalformedParcel: return "malformed-parcel";
    case ReceiverErrc::kWrongReceiver: return "wrong-receiver";
    case ReceiverErrc::kBadSenderSignature: return "bad-sender-signature";
    case ReceiverErrc::kOpeningMismatch: return "opening-mismatch";
    case ReceiverErrc::kWitnessUnreachable: return "witness-unreachable";
    case ReceiverErrc::kEqualityFailed: return "amount-equality-failed";
  }
  return "unknown";
}

SignedEqualityQuery sign_equality_query(const UserKeys& requester, const EqualityQuery& query) {
  SignedEqualityQuery out;
  out.requester = requester.sig.pub;
  out.query = query;
  out.sig = sign(requester.sig.sec, equality_query_message(out.requester, query));
  return out;
}

ReceiverDecision receiver_check(const UserKeys& receiver, const Envelope& envelope,
                                const mpz_class& expected_amount, const PaillierPublicKey& pk_w,
                                WitnessChannel& witness, RandomSource& rng) {
  ReceiverDecision decision;

  Bytes plain;
  try {
    plain = open_envelope(receiver.enc, envelope);
  } catch (const EnvelopeError&) {
    decision.status = ReceiverErrc::kEnvelope;
    return decision;
  }

  ReceiverParcel parcel;
  try {
    Decoder dec(plain);
    parcel = decode_receiver_parcel(dec);
    dec.expect_end();
  } catch (const DecodeError&) {
    decision.status = ReceiverErrc::kMalformedParcel;
    return decision;
  }

  const SplitTx& tx = parcel.tx;
  if (parcel.output_index >= tx.outputs.size() ||
      tx.outputs[parcel.output_index].receiver != receiver.sig.pub) {
    decision.status = ReceiverErrc::kWrongReceiver;
    return decision;
  }
  // The sender key must be the one recorded as owner of the bill being spent.
  if (tx.sender != tx.bill_info.owner ||
      !verify_sig(tx.sender, sender_message(tx), parcel.sender_sig)) {
    decision.status = ReceiverErrc::kBadSenderSignature;
    return decision;
  }

  const Ciphertext& mine = tx.outputs[parcel.output_index].amount_ct;
  const Opening& op = parcel.opening;
  bool opening_ok = op.amount >= 0 && op.amount < pk_w.n && op.randomness > 0 &&
                    op.randomness < pk_w.n;
  if (opening_ok) {
    try {
      opening_ok = encrypt(pk_w, op.amount, op.randomness) == mine;
    } catch (const std::invalid_argument&) {
      opening_ok = false;
    }
  }
  if (!opening_ok) {
    decision.status = ReceiverErrc::kOpeningMismatch;
    return decision;
  }

  if (expected_amount < 0 || expected_amount >= pk_w.n) {
    decision.status = ReceiverErrc::kEqualityFailed;
    return decision;
  }
  const mpz_class r1 = random_below(rng, pk_w.n);
  const mpz_class r2 = random_below(rng, pk_w.n);
  const EqualityQuery query = make_equality_query(pk_w, mine, expected_amount, r1, r2, rng);
  const std::optional<EqualityAnswer> answer = witness.ask(sign_equality_query(receiver, query));
  if (!answer) {
    decision.status = ReceiverErrc::kWitnessUnreachable;
    return decision;
  }
  if (!check_equality_response(r1, r2, *answer)) {
    decision.status = ReceiverErrc::kEqualityFailed;
    return decision;
  }

  decision.status = ReceiverErrc::kAccepted;
  decision.countersignature = sign(receiver.sig.sec, receiver_message(tx, parcel.sender_sig));
  decision.parcel = std::move(parcel);
  return decision;
}

}  // namespace billchain::protocol
