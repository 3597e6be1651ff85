#include "billchain/protocol/roles.hpp"

namespace billchain::protocol {

WitnessService::WitnessService(WitnessKeys keys, uint32_t range_bits)
    : keys_(std::move(keys)), range_bits_(range_bits) {}

void WitnessService::register_user(const SigPublicKey& user) {
  std::lock_guard lock(mu_);
  registered_.insert(user);
}

bool WitnessService::is_registered(const SigPublicKey& user) const {
  std::lock_guard lock(mu_);
  return registered_.contains(user);
}

IssueResult WitnessService::issue(const SigPublicKey& owner, const EncPublicKey& owner_enc,
                                  const mpz_class& amount, RandomSource& rng) const {
  if (amount < 1 || amount > (mpz_class(1) << range_bits_) || amount >= public_key().n) {
    throw ProtocolError(ProtocolErrc::kAmountOutOfRange, "issue amount outside [1, 2^L]");
  }
  IssueResult out;
  out.opening = Opening{amount, random_unit(rng, public_key().n)};
  out.tx.nonce = rng.fixed<rht::RootNonce>();
  out.tx.info.amount_ct = encrypt_with_secret(keys_.paillier, amount, out.opening.randomness);
  out.tx.info.owner = owner;
  out.tx.witness_sig = sign(keys_.sig.sec, issue_message(out.tx.nonce, out.tx.info));
  out.id = rht::compute_root_id(out.tx.nonce, out.tx.info);
  out.owner_envelope = seal_for(owner_enc, to_bytes(IssueParcel{out.id, out.tx.info, out.opening}),
                                rng);
  return out;
}

std::optional<EqualityAnswer> WitnessService::answer(const SignedEqualityQuery& query) {
  const Digest qh = hash256(to_bytes(query));
  const bool authentic =
      verify_sig(query.requester, equality_query_message(query.requester, query.query), query.sig);
  std::optional<EqualityAnswer> result;
  {
    std::lock_guard lock(mu_);
    if (authentic && registered_.contains(query.requester)) {
      try {
        result = answer_equality_query(keys_.paillier.sec, query.query);
      } catch (const std::invalid_argument&) {
        result.reset();
      }
    }
    audit_.push_back(AuditEntry{query.requester, qh, result.has_value()});
  }
  return result;
}

std::vector<AuditEntry> WitnessService::audit_log() const {
  std::lock_guard lock(mu_);
  return audit_;
}

IssueParcel open_issue_parcel(const UserKeys& owner, const PaillierPublicKey& pk_w,
                              const Envelope& envelope) {
  const Bytes plain = open_envelope(owner.enc, envelope);
  Decoder dec(plain);
  IssueParcel parcel = decode_issue_parcel(dec);
  dec.expect_end();
  if (parcel.opening.randomness <= 0 || parcel.opening.randomness >= pk_w.n ||
      parcel.opening.amount < 0 || parcel.opening.amount >= pk_w.n ||
      encrypt(pk_w, parcel.opening.amount, parcel.opening.randomness) != parcel.info.amount_ct) {
    throw ProtocolError(ProtocolErrc::kOpeningMismatch, "issue parcel opening mismatch");
  }
  return parcel;
}

}  // namespace billchain::protocol
